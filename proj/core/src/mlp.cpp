#include "fliplab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"
#include "fliplab/gbt.hpp"
#include "fliplab/seed.hpp"

namespace fliplab {

void MlpParams::validate() const {
  if (hidden_units < 1) fail(ErrorCode::kInvalidSpec, "hidden_units must be >= 1");
  if (batch_size < 1) fail(ErrorCode::kInvalidSpec, "batch_size must be >= 1");
  if (!(learning_rate > 0.0)) fail(ErrorCode::kInvalidSpec, "learning_rate must be > 0");
  if (max_epochs < 0) fail(ErrorCode::kInvalidSpec, "max_epochs must be >= 0");
}

std::size_t MlpNetwork::num_parameters() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

Matrix MlpNetwork::forward(const Matrix& x) const {
  Matrix hidden = ((x * w1.transpose()).rowwise() + b1.transpose()).cwiseMax(0.0);
  Matrix logits = (hidden * w2.transpose()).rowwise() + b2.transpose();
  return softmax_rows(logits);
}

double MlpNetwork::loss_and_gradient(const Matrix& x, const LabelVector& y, Vector* gradient) const {
  const auto n = x.rows();
  if (static_cast<std::size_t>(n) != y.size()) fail(ErrorCode::kLengthMismatch, "batch rows and labels differ");
  if (n == 0) fail(ErrorCode::kEmpty, "empty batch");

  const Matrix pre = (x * w1.transpose()).rowwise() + b1.transpose();
  const Matrix hidden = pre.cwiseMax(0.0);
  const Matrix proba = softmax_rows((hidden * w2.transpose()).rowwise() + b2.transpose());

  double loss = 0.0;
  Matrix delta2 = proba;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = code(y[static_cast<std::size_t>(i)]);
    loss -= std::log(std::max(proba(i, c), 1e-300));
    delta2(i, c) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  if (gradient == nullptr) return loss;

  delta2 *= inv_n;
  const Matrix gw2 = delta2.transpose() * hidden;
  const Vector gb2 = delta2.colwise().sum().transpose();
  const Matrix delta1 = (delta2 * w2).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  const Matrix gw1 = delta1.transpose() * x;
  const Vector gb1 = delta1.colwise().sum().transpose();

  gradient->resize(static_cast<Eigen::Index>(num_parameters()));
  Eigen::Index k = 0;
  auto put = [&](const auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) (*gradient)(k++) = m(r, c);
    }
  };
  put(gw1);
  put(gb1);
  put(gw2);
  put(gb2);
  return loss;
}

Vector MlpNetwork::flat_parameters() const {
  Vector theta(static_cast<Eigen::Index>(num_parameters()));
  Eigen::Index k = 0;
  auto put = [&](const auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) theta(k++) = m(r, c);
    }
  };
  put(w1);
  put(b1);
  put(w2);
  put(b2);
  return theta;
}

void MlpNetwork::set_flat_parameters(const Vector& theta) {
  if (static_cast<std::size_t>(theta.size()) != num_parameters()) {
    fail(ErrorCode::kLengthMismatch, "parameter vector has the wrong length");
  }
  Eigen::Index k = 0;
  auto take = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = theta(k++);
    }
  };
  take(w1);
  take(b1);
  take(w2);
  take(b2);
}

MlpNetwork MlpNetwork::initialize(std::size_t inputs, std::size_t hidden, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MlpNetwork net;
  const auto d = static_cast<Eigen::Index>(inputs);
  const auto h = static_cast<Eigen::Index>(hidden);
  net.w1.resize(h, d);
  net.w2.resize(kNumClasses, h);
  std::uniform_real_distribution<double> u1(-std::sqrt(6.0 / static_cast<double>(inputs)),
                                            std::sqrt(6.0 / static_cast<double>(inputs)));
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) net.w1(r, c) = u1(rng);
  }
  std::uniform_real_distribution<double> u2(-std::sqrt(6.0 / static_cast<double>(hidden)),
                                            std::sqrt(6.0 / static_cast<double>(hidden)));
  for (Eigen::Index r = 0; r < kNumClasses; ++r) {
    for (Eigen::Index c = 0; c < h; ++c) net.w2(r, c) = u2(rng);
  }
  net.b1 = Vector::Zero(h);
  net.b2 = Vector::Zero(kNumClasses);
  return net;
}

MlpModel MlpModel::fit(const Matrix& x, const LabelVector& y, const MlpParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = y.size();
  if (n == 0) fail(ErrorCode::kEmpty, "empty training set");
  if (static_cast<std::size_t>(x.rows()) != n) fail(ErrorCode::kLengthMismatch, "feature rows and labels differ");

  MlpNetwork net = MlpNetwork::initialize(static_cast<std::size_t>(x.cols()),
                                          static_cast<std::size_t>(params.hidden_units),
                                          derive_seed(seed, "init"));
  const auto prior = log_prior_margin(y);
  for (int c = 0; c < kNumClasses; ++c) net.b2(c) = prior[c];

  std::mt19937_64 rng(derive_seed(seed, "shuffle"));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Vector theta = net.flat_parameters();
  Vector grad;
  const auto batch = static_cast<std::size_t>(params.batch_size);
  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      Matrix xb(static_cast<Eigen::Index>(end - start), x.cols());
      LabelVector yb(end - start);
      for (std::size_t i = start; i < end; ++i) {
        xb.row(static_cast<Eigen::Index>(i - start)) = x.row(static_cast<Eigen::Index>(order[i]));
        yb[i - start] = y[order[i]];
      }
      net.loss_and_gradient(xb, yb, &grad);
      theta -= params.learning_rate * grad;
      net.set_flat_parameters(theta);
    }
  }
  return MlpModel(std::move(net));
}

Matrix MlpModel::predict_proba(const Matrix& features) const {
  check_schema(features);
  return network_.forward(features);
}

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).data(), m.row(r).data() + m.cols()));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, Eigen::Index cols_if_empty) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? cols_if_empty : static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) fail(ErrorCode::kParse, "ragged matrix in model JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json MlpModel::to_json() const {
  const auto& n = network_;
  return {{"w1", matrix_json(n.w1)},
          {"b1", std::vector<double>(n.b1.data(), n.b1.data() + n.b1.size())},
          {"w2", matrix_json(n.w2)},
          {"b2", std::vector<double>(n.b2.data(), n.b2.data() + n.b2.size())}};
}

MlpModel MlpModel::from_json(const nlohmann::json& j) {
  MlpNetwork n;
  n.w1 = matrix_from_json(j.at("w1"), 0);
  n.b1 = vector_from_json(j.at("b1"));
  n.w2 = matrix_from_json(j.at("w2"), 0);
  n.b2 = vector_from_json(j.at("b2"));
  if (n.b1.size() != n.w1.rows() || n.w2.cols() != n.w1.rows() || n.w2.rows() != kNumClasses ||
      n.b2.size() != kNumClasses) {
    fail(ErrorCode::kParse, "MLP layer shapes are inconsistent");
  }
  return MlpModel(std::move(n));
}

void to_json(nlohmann::json& j, const MlpParams& p) {
  j = nlohmann::json{{"hidden_units", p.hidden_units},
                     {"batch_size", p.batch_size},
                     {"learning_rate", p.learning_rate},
                     {"max_epochs", p.max_epochs}};
}

void from_json(const nlohmann::json& j, MlpParams& p) {
  p.hidden_units = j.value("hidden_units", p.hidden_units);
  p.batch_size = j.value("batch_size", p.batch_size);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.max_epochs = j.value("max_epochs", p.max_epochs);
}

}  // namespace fliplab

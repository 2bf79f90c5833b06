#include "fliplab/knn.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

void KnnParams::validate() const {
  if (k < 1) fail(ErrorCode::kInvalidSpec, "k must be >= 1");
}

KnnModel::KnnModel(Matrix train_x, LabelVector train_y, int k)
    : train_x_(std::move(train_x)), train_y_(std::move(train_y)), k_(k) {
  if (static_cast<std::size_t>(train_x_.rows()) != train_y_.size()) {
    fail(ErrorCode::kLengthMismatch, "KNN training rows and labels differ");
  }
  if (k_ < 1 || static_cast<std::size_t>(k_) > train_y_.size()) {
    fail(ErrorCode::kInvalidSpec,
         "k = " + std::to_string(k_) + " must lie in [1, " + std::to_string(train_y_.size()) + "]");
  }
}

KnnModel KnnModel::fit(const Matrix& x, const LabelVector& y, const KnnParams& params) {
  params.validate();
  return KnnModel(x, y, params.k);
}

std::vector<std::size_t> KnnModel::neighbours(const double* row) const {
  const auto n = static_cast<std::size_t>(train_x_.rows());
  const auto d = train_x_.cols();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* t = train_x_.row(static_cast<Eigen::Index>(i)).data();
    double s = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
      const double diff = t[c] - row[c];
      s += diff * diff;
    }
    dist[i] = {s, i};
  }
  const auto k = static_cast<std::size_t>(k_);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = dist[j].second;
  return out;
}

Matrix KnnModel::predict_proba(const Matrix& features) const {
  check_schema(features);
  Matrix proba = Matrix::Zero(features.rows(), kNumClasses);
  const double share = 1.0 / static_cast<double>(k_);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (std::size_t j : neighbours(features.row(i).data())) proba(i, code(train_y_[j])) += share;
  }
  return proba;
}

nlohmann::json KnnModel::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < train_x_.rows(); ++r) {
    rows.push_back(std::vector<double>(train_x_.row(r).data(), train_x_.row(r).data() + train_x_.cols()));
  }
  std::vector<int> labels;
  labels.reserve(train_y_.size());
  for (RiskLabel l : train_y_) labels.push_back(code(l));
  return {{"k", k_}, {"n_features", train_x_.cols()}, {"train_x", std::move(rows)}, {"train_y", labels}};
}

KnnModel KnnModel::from_json(const nlohmann::json& j) {
  const auto& rows = j.at("train_x");
  const auto d = j.at("n_features").get<Eigen::Index>();
  Matrix x(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != d) fail(ErrorCode::kParse, "ragged KNN training matrix");
    for (Eigen::Index c = 0; c < d; ++c) {
      x(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)].get<double>();
    }
  }
  LabelVector y;
  for (int c : j.at("train_y").get<std::vector<int>>()) y.push_back(label_from_code(c));
  return KnnModel(std::move(x), std::move(y), j.at("k").get<int>());
}

void to_json(nlohmann::json& j, const KnnParams& p) { j = nlohmann::json{{"k", p.k}}; }
void from_json(const nlohmann::json& j, KnnParams& p) { p.k = j.value("k", p.k); }

}  // namespace fliplab

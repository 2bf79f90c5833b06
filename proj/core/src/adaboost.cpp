#include "fliplab/adaboost.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

namespace {

RiskLabel leaf_vote(const DecisionTree& tree, const double* row) {
  const auto& dist = tree.leaf(row).distribution;
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (dist[c] > dist[best]) best = c;
  }
  return static_cast<RiskLabel>(best);
}

}  // namespace

void AdaBoostParams::validate() const {
  if (n_rounds < 1) fail(ErrorCode::kInvalidSpec, "n_rounds must be >= 1");
  if (max_depth < 0) fail(ErrorCode::kInvalidSpec, "max_depth must be >= 0");
  if (!(learning_rate > 0.0)) fail(ErrorCode::kInvalidSpec, "learning_rate must be > 0");
}

AdaBoostModel::AdaBoostModel(std::vector<DecisionTree> stages, std::vector<double> stage_weights,
                             std::vector<double> stage_errors, std::size_t n_features)
    : stages_(std::move(stages)),
      stage_weights_(std::move(stage_weights)),
      stage_errors_(std::move(stage_errors)),
      n_features_(n_features) {
  if (stages_.empty() || stages_.size() != stage_weights_.size()) {
    fail(ErrorCode::kInvalidSpec, "AdaBoost needs one weight per stage and at least one stage");
  }
  if (stage_errors_.size() != stages_.size()) stage_errors_.resize(stages_.size(), 0.0);
}

AdaBoostModel AdaBoostModel::fit(const Matrix& x, const LabelVector& y, const AdaBoostParams& params) {
  params.validate();
  const std::size_t n = y.size();
  if (n == 0) fail(ErrorCode::kEmpty, "empty training set");

  TreeGrowOptions options;
  options.max_depth = params.max_depth;
  std::mt19937_64 unused_rng(0);  // all features are examined, so growth draws nothing

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<DecisionTree> stages;
  std::vector<double> alphas;
  std::vector<double> errors;
  std::vector<char> miss(n);
  const double chance_error = 1.0 - 1.0 / kNumClasses;

  for (int round = 0; round < params.n_rounds; ++round) {
    DecisionTree tree = grow_tree(x, y, w, options, unused_rng);
    double err = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      miss[i] = leaf_vote(tree, x.row(static_cast<Eigen::Index>(i)).data()) != y[i];
      err += miss[i] ? w[i] : 0.0;
      total += w[i];
    }
    err /= total;

    if (err <= 0.0) {
      stages.push_back(std::move(tree));
      alphas.push_back(1.0);
      errors.push_back(0.0);
      break;
    }
    if (err >= chance_error) {
      if (stages.empty()) {
        stages.push_back(std::move(tree));
        alphas.push_back(1.0);
        errors.push_back(err);
      }
      break;
    }
    const double alpha =
        params.learning_rate * (std::log((1.0 - err) / err) + std::log(kNumClasses - 1.0));
    stages.push_back(std::move(tree));
    alphas.push_back(alpha);
    errors.push_back(err);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (miss[i]) w[i] *= std::exp(alpha);
      sum += w[i];
    }
    for (double& v : w) v /= sum;
  }
  return AdaBoostModel(std::move(stages), std::move(alphas), std::move(errors),
                       static_cast<std::size_t>(x.cols()));
}

Matrix AdaBoostModel::predict_proba(const Matrix& features) const {
  check_schema(features);
  double alpha_sum = 0.0;
  for (double a : stage_weights_) alpha_sum += a;
  Matrix out = Matrix::Zero(features.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double* row = features.row(i).data();
    for (std::size_t m = 0; m < stages_.size(); ++m) {
      out(i, code(leaf_vote(stages_[m], row))) += stage_weights_[m];
    }
  }
  out /= alpha_sum;
  return out;
}

AdaBoostModel AdaBoostModel::truncated(std::size_t n_stages) const {
  const std::size_t m = std::max<std::size_t>(1, std::min(n_stages, stages_.size()));
  return AdaBoostModel({stages_.begin(), stages_.begin() + static_cast<std::ptrdiff_t>(m)},
                       {stage_weights_.begin(), stage_weights_.begin() + static_cast<std::ptrdiff_t>(m)},
                       {stage_errors_.begin(), stage_errors_.begin() + static_cast<std::ptrdiff_t>(m)},
                       n_features_);
}

nlohmann::json AdaBoostModel::to_json() const {
  return {{"n_features", n_features_},
          {"stages", stages_},
          {"stage_weights", stage_weights_},
          {"stage_errors", stage_errors_}};
}

AdaBoostModel AdaBoostModel::from_json(const nlohmann::json& j) {
  return AdaBoostModel(j.at("stages").get<std::vector<DecisionTree>>(),
                       j.at("stage_weights").get<std::vector<double>>(),
                       j.value("stage_errors", std::vector<double>{}),
                       j.at("n_features").get<std::size_t>());
}

void to_json(nlohmann::json& j, const AdaBoostParams& p) {
  j = nlohmann::json{{"n_rounds", p.n_rounds}, {"max_depth", p.max_depth}, {"learning_rate", p.learning_rate}};
}

void from_json(const nlohmann::json& j, AdaBoostParams& p) {
  p.n_rounds = j.value("n_rounds", p.n_rounds);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
}

}  // namespace fliplab

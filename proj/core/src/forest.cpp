#include "fliplab/forest.hpp"

#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"
#include "fliplab/seed.hpp"

namespace fliplab {

void ForestParams::validate() const {
  if (n_trees < 1) fail(ErrorCode::kInvalidSpec, "n_trees must be >= 1");
  if (max_features < 0) fail(ErrorCode::kInvalidSpec, "max_features must be >= 0");
  if (max_depth < -1) fail(ErrorCode::kInvalidSpec, "max_depth must be >= -1");
  if (min_samples_leaf < 1) fail(ErrorCode::kInvalidSpec, "min_samples_leaf must be >= 1");
}

ForestModel::ForestModel(std::vector<DecisionTree> trees, std::size_t n_features)
    : trees_(std::move(trees)), n_features_(n_features) {
  if (trees_.empty()) fail(ErrorCode::kInvalidSpec, "forest needs at least one tree");
}

ForestModel ForestModel::fit(const Matrix& x, const LabelVector& y, const ForestParams& params,
                             std::uint64_t seed) {
  params.validate();
  const std::size_t n = y.size();
  if (n == 0) fail(ErrorCode::kEmpty, "empty training set");
  TreeGrowOptions options;
  options.max_depth = params.max_depth;
  options.min_samples_leaf = params.min_samples_leaf;
  options.max_features = params.max_features;
  options.random_thresholds = params.random_thresholds;

  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_trees));
  std::vector<double> counts(n);
  for (int t = 0; t < params.n_trees; ++t) {
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    std::span<const double> weights;
    if (params.bootstrap) {
      std::fill(counts.begin(), counts.end(), 0.0);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t k = 0; k < n; ++k) counts[pick(rng)] += 1.0;
      weights = counts;
    }
    trees.push_back(grow_tree(x, y, weights, options, rng));
  }
  return ForestModel(std::move(trees), static_cast<std::size_t>(x.cols()));
}

Matrix ForestModel::predict_proba(const Matrix& features) const {
  check_schema(features);
  Matrix out = Matrix::Zero(features.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double* row = features.row(i).data();
    for (const DecisionTree& tree : trees_) {
      const auto& dist = tree.leaf(row).distribution;
      for (int c = 0; c < kNumClasses; ++c) out(i, c) += dist[c];
    }
  }
  out /= static_cast<double>(trees_.size());
  return out;
}

nlohmann::json ForestModel::to_json() const {
  return {{"n_features", n_features_}, {"trees", trees_}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  return ForestModel(j.at("trees").get<std::vector<DecisionTree>>(), j.at("n_features").get<std::size_t>());
}

void to_json(nlohmann::json& j, const ForestParams& p) {
  j = nlohmann::json{{"n_trees", p.n_trees},
                     {"max_features", p.max_features},
                     {"max_depth", p.max_depth},
                     {"min_samples_leaf", p.min_samples_leaf},
                     {"bootstrap", p.bootstrap},
                     {"random_thresholds", p.random_thresholds}};
}

void from_json(const nlohmann::json& j, ForestParams& p) {
  p.n_trees = j.value("n_trees", p.n_trees);
  p.max_features = j.value("max_features", p.max_features);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
  p.bootstrap = j.value("bootstrap", p.bootstrap);
  p.random_thresholds = j.value("random_thresholds", p.random_thresholds);
}

}  // namespace fliplab

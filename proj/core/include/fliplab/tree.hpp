#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/classifier.hpp"

namespace fliplab {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // rows with x[feature] <= threshold go left
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint32_t n_samples = 0;
  std::array<double, kNumClasses> distribution{};  // weighted class shares at this node

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Axis-aligned binary classification tree stored as a flat preorder node array; node 0 is the root.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t leaf_index(const double* row) const;
  const TreeNode& leaf(const double* row) const { return nodes_[leaf_index(row)]; }
  std::size_t leaf_count() const;
  int depth() const;

  // Largest feature index used by a split, or -1 for a single leaf.
  int max_feature() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct TreeGrowOptions {
  int max_depth = -1;  // -1: grow until pure
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  int max_features = 0;          // non-constant features examined per split; 0 = all
  bool random_thresholds = false;  // one uniform threshold per feature (extremely randomised)
};

// Gini CART growth. Rows with zero weight are excluded; `weights` may be empty for unit weights.
DecisionTree grow_tree(const Matrix& x, std::span<const RiskLabel> y, std::span<const double> weights,
                       const TreeGrowOptions& options, std::mt19937_64& rng);

// A single tree used directly as a model (hand-built teachers, surrogates).
class TreeClassifier : public Classifier {
 public:
  TreeClassifier(DecisionTree tree, std::size_t n_features);

  std::size_t num_features() const override { return n_features_; }
  Matrix predict_proba(const Matrix& features) const override;
  const DecisionTree& tree() const { return tree_; }

 private:
  DecisionTree tree_;
  std::size_t n_features_;
};

void to_json(nlohmann::json& j, const DecisionTree& tree);
void from_json(const nlohmann::json& j, DecisionTree& tree);

}  // namespace fliplab

#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/tree.hpp"

namespace fliplab {

struct ForestParams {
  int n_trees = 100;
  int max_features = 5;  // ceil(sqrt(25))
  int max_depth = -1;
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  bool random_thresholds = false;

  static ForestParams random_forest() { return {}; }
  static ForestParams extra_trees() {
    ForestParams p;
    p.bootstrap = false;
    p.random_thresholds = true;
    return p;
  }
  void validate() const;
  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

// Random forest or extra-trees ensemble; probabilities are the mean of per-tree leaf distributions.
// Tree t draws its bootstrap sample and feature subsets from derive_seed(seed, {t}), keyed by row
// index, so results depend on row order only through those indices.
class ForestModel : public Classifier {
 public:
  ForestModel(std::vector<DecisionTree> trees, std::size_t n_features);

  static ForestModel fit(const Matrix& x, const LabelVector& y, const ForestParams& params,
                         std::uint64_t seed);

  std::size_t num_features() const override { return n_features_; }
  Matrix predict_proba(const Matrix& features) const override;
  const std::vector<DecisionTree>& trees() const { return trees_; }

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
  std::size_t n_features_;
};

void to_json(nlohmann::json& j, const ForestParams& p);
void from_json(const nlohmann::json& j, ForestParams& p);

}  // namespace fliplab

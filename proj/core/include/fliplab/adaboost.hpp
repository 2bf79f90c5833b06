#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/tree.hpp"

namespace fliplab {

struct AdaBoostParams {
  int n_rounds = 50;
  int max_depth = 3;
  double learning_rate = 1.0;

  void validate() const;
  friend bool operator==(const AdaBoostParams&, const AdaBoostParams&) = default;
};

// SAMME multiclass boosting over weighted CART trees.
class AdaBoostModel : public Classifier {
 public:
  AdaBoostModel(std::vector<DecisionTree> stages, std::vector<double> stage_weights,
                std::vector<double> stage_errors, std::size_t n_features);

  // Stops early on a perfect stage or when a stage has no edge over chance (error >= 1 - 1/K).
  static AdaBoostModel fit(const Matrix& x, const LabelVector& y, const AdaBoostParams& params);

  std::size_t num_features() const override { return n_features_; }
  // Stage-weight-normalised vote shares.
  Matrix predict_proba(const Matrix& features) const override;

  std::size_t num_stages() const { return stages_.size(); }
  const std::vector<double>& stage_weights() const { return stage_weights_; }
  // Weighted training error of each kept stage at the time it was fitted.
  const std::vector<double>& stage_errors() const { return stage_errors_; }
  AdaBoostModel truncated(std::size_t n_stages) const;

  nlohmann::json to_json() const;
  static AdaBoostModel from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> stages_;
  std::vector<double> stage_weights_;
  std::vector<double> stage_errors_;
  std::size_t n_features_;
};

void to_json(nlohmann::json& j, const AdaBoostParams& p);
void from_json(const nlohmann::json& j, AdaBoostParams& p);

}  // namespace fliplab

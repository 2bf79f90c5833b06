#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/classifier.hpp"

namespace fliplab {

struct GbtParams {
  int n_rounds = 50;
  int max_depth = 4;
  double learning_rate = 0.3;
  double lambda = 1.0;            // L2 penalty on leaf weights
  double min_child_weight = 1.0;  // minimum hessian sum per child

  void validate() const;
  friend bool operator==(const GbtParams&, const GbtParams&) = default;
};

struct RegressionNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // leaf score

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const RegressionNode&, const RegressionNode&) = default;
};

class RegressionTree {
 public:
  RegressionTree() : nodes_(1) {}
  explicit RegressionTree(std::vector<RegressionNode> nodes);

  double predict(const double* row) const;
  const std::vector<RegressionNode>& nodes() const { return nodes_; }
  RegressionTree scaled(double factor) const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::vector<RegressionNode> nodes_;
};

struct NewtonTreeOptions {
  int max_depth = 4;
  double lambda = 1.0;
  double min_child_weight = 1.0;
};

// Second-order tree: exact greedy splits on gain
//   0.5 * (G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda))
// and leaf weights -G/(H+lambda). Leaf values are returned unshrunk.
RegressionTree grow_newton_tree(const Matrix& x, std::span<const double> grad,
                                std::span<const double> hess, const NewtonTreeOptions& options);

// Per-class softmax gradients g = p - y and hessians h = p(1 - p) for given margins.
void softmax_grad_hess(const Matrix& margins, const LabelVector& y, int cls, std::vector<double>& grad,
                       std::vector<double>& hess);

// Softmax-objective boosting, one tree per class per round (XGBoost-style multi:softprob).
// Margins start from the clipped log class priors of the training labels.
class GbtModel : public Classifier {
 public:
  GbtModel(std::array<double, kNumClasses> base_margin,
           std::vector<std::array<RegressionTree, kNumClasses>> rounds, std::size_t n_features);

  static GbtModel fit(const Matrix& x, const LabelVector& y, const GbtParams& params);

  std::size_t num_features() const override { return n_features_; }
  Matrix predict_proba(const Matrix& features) const override;
  Matrix margins(const Matrix& features) const;

  const std::array<double, kNumClasses>& base_margin() const { return base_margin_; }
  const std::vector<std::array<RegressionTree, kNumClasses>>& rounds() const { return rounds_; }

  nlohmann::json to_json() const;
  static GbtModel from_json(const nlohmann::json& j);

 private:
  std::array<double, kNumClasses> base_margin_;
  std::vector<std::array<RegressionTree, kNumClasses>> rounds_;
  std::size_t n_features_;
};

// Floor applied to class priors before taking logs for the initial margin.
inline constexpr double kPriorFloor = 1e-12;
std::array<double, kNumClasses> log_prior_margin(const LabelVector& y);

// Row-wise softmax.
Matrix softmax_rows(const Matrix& margins);

void to_json(nlohmann::json& j, const GbtParams& p);
void from_json(const nlohmann::json& j, GbtParams& p);

}  // namespace fliplab

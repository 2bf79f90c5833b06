#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/labels.hpp"

namespace fliplab {

inline constexpr double kLogLossEpsilon = 1e-15;

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(const std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>& counts)
      : counts_(counts) {}

  std::uint64_t operator()(int true_class, int predicted_class) const {
    return counts_[true_class][predicted_class];
  }
  void add(RiskLabel truth, RiskLabel predicted, std::uint64_t n = 1) {
    counts_[code(truth)][code(predicted)] += n;
  }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(int true_class) const;
  std::uint64_t column_sum(int predicted_class) const;

  const auto& counts() const { return counts_; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts_{};
};

ConfusionMatrix confusion_matrix(std::span<const RiskLabel> y_true, std::span<const RiskLabel> y_pred);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double macro_recall = 0.0;
  double macro_precision = 0.0;
  double macro_f1 = 0.0;
  bool has_log_loss = false;
  double log_loss = 0.0;
  std::array<ClassScores, kNumClasses> per_class{};
  ConfusionMatrix confusion;
  bool degenerate_constant_prediction = false;
};

// One-vs-rest scores with macro averaging over all four classes; undefined ratios are 0.
MetricsReport classification_metrics(const ConfusionMatrix& cm);

// -(1/N) sum_i ln clip(p_i,true, eps, 1-eps).
double log_loss(std::span<const RiskLabel> y_true, const Matrix& proba,
                double epsilon = kLogLossEpsilon);

// The per-label terms F_j whose sum is log_loss().
std::array<double, kNumClasses> log_loss_per_label(std::span<const RiskLabel> y_true,
                                                   const Matrix& proba,
                                                   double epsilon = kLogLossEpsilon);

// Confusion matrix, accuracy/P/R/F1 and log loss in one report.
MetricsReport evaluate(std::span<const RiskLabel> y_true, const Matrix& proba);

void to_json(nlohmann::json& j, const ConfusionMatrix& cm);
void from_json(const nlohmann::json& j, ConfusionMatrix& cm);
void to_json(nlohmann::json& j, const MetricsReport& report);
void from_json(const nlohmann::json& j, MetricsReport& report);

}  // namespace fliplab

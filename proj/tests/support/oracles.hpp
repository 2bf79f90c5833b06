#pragma once

#include <array>
#include <span>

#include "fliplab/labels.hpp"

namespace fliplab::testing {

struct RecountScores {
  double accuracy = 0.0;
  double macro_recall = 0.0;
  double macro_precision = 0.0;
  double macro_f1 = 0.0;
};

// Per-sample recount of the one-vs-rest counts, without building a confusion matrix.
inline RecountScores recount(std::span<const RiskLabel> truth, std::span<const RiskLabel> pred) {
  RecountScores s;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == pred[i] ? 1 : 0;
  s.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());
  for (RiskLabel c : kAllLabels) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool t = truth[i] == c;
      const bool p = pred[i] == c;
      if (t && p) tp += 1;
      if (!t && p) fp += 1;
      if (t && !p) fn += 1;
    }
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    s.macro_precision += precision / kNumClasses;
    s.macro_recall += recall / kNumClasses;
    s.macro_f1 += f1 / kNumClasses;
  }
  return s;
}

// Closed forms for a constant HIGH predictor with test HIGH share p.
struct CollapseForms {
  double accuracy, recall, precision, f1;
};
inline CollapseForms collapse_forms(double p) { return {p, 0.25, p / 4.0, p / (2.0 * (1.0 + p))}; }

}  // namespace fliplab::testing

#include "fliplab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts_) {
    for (std::uint64_t v : row) t += v;
  }
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int c = 0; c < kNumClasses; ++c) t += counts_[c][c];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(int true_class) const {
  std::uint64_t t = 0;
  for (std::uint64_t v : counts_[true_class]) t += v;
  return t;
}

std::uint64_t ConfusionMatrix::column_sum(int predicted_class) const {
  std::uint64_t t = 0;
  for (const auto& row : counts_) t += row[predicted_class];
  return t;
}

ConfusionMatrix confusion_matrix(std::span<const RiskLabel> y_true, std::span<const RiskLabel> y_pred) {
  if (y_true.size() != y_pred.size()) {
    fail(ErrorCode::kLengthMismatch, "y_true has " + std::to_string(y_true.size()) +
                                         " entries, y_pred " + std::to_string(y_pred.size()));
  }
  if (y_true.empty()) fail(ErrorCode::kEmpty, "confusion matrix of zero samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) cm.add(y_true[i], y_pred[i]);
  return cm;
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) fail(ErrorCode::kEmpty, "confusion matrix is empty");

  MetricsReport r;
  r.confusion = cm;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  int predicted_classes = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto tp = static_cast<double>(cm(c, c));
    const auto actual = static_cast<double>(cm.row_sum(c));      // TP + FN
    const auto predicted = static_cast<double>(cm.column_sum(c));  // TP + FP
    if (predicted > 0) ++predicted_classes;
    ClassScores& s = r.per_class[c];
    s.support = cm.row_sum(c);
    s.recall = actual > 0 ? tp / actual : 0.0;
    s.precision = predicted > 0 ? tp / predicted : 0.0;
    s.f1 = (s.precision + s.recall) > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  }
  for (const auto& s : r.per_class) {
    r.macro_recall += s.recall;
    r.macro_precision += s.precision;
    r.macro_f1 += s.f1;
  }
  r.macro_recall /= kNumClasses;
  r.macro_precision /= kNumClasses;
  r.macro_f1 /= kNumClasses;
  r.degenerate_constant_prediction = predicted_classes == 1;
  return r;
}

namespace {

void check_proba(std::span<const RiskLabel> y_true, const Matrix& proba) {
  if (static_cast<std::size_t>(proba.rows()) != y_true.size()) {
    fail(ErrorCode::kLengthMismatch, "probability rows " + std::to_string(proba.rows()) +
                                         " != labels " + std::to_string(y_true.size()));
  }
  if (proba.cols() != kNumClasses) fail(ErrorCode::kLengthMismatch, "probability matrix needs 4 columns");
  if (y_true.empty()) fail(ErrorCode::kEmpty, "log loss of zero samples");
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    const double s = proba.row(i).sum();
    if (!(std::abs(s - 1.0) <= 1e-6) || (proba.row(i).array() < 0.0).any()) {
      fail(ErrorCode::kNonStochasticRow, "row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
  }
}

}  // namespace

std::array<double, kNumClasses> log_loss_per_label(std::span<const RiskLabel> y_true,
                                                   const Matrix& proba, double epsilon) {
  check_proba(y_true, proba);
  std::array<double, kNumClasses> per_label{};
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int c = code(y_true[i]);
    const double p = std::clamp(proba(static_cast<Eigen::Index>(i), c), epsilon, 1.0 - epsilon);
    per_label[c] -= std::log(p);
  }
  for (double& f : per_label) f /= static_cast<double>(y_true.size());
  return per_label;
}

double log_loss(std::span<const RiskLabel> y_true, const Matrix& proba, double epsilon) {
  check_proba(y_true, proba);
  double sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double p =
        std::clamp(proba(static_cast<Eigen::Index>(i), code(y_true[i])), epsilon, 1.0 - epsilon);
    sum -= std::log(p);
  }
  return sum / static_cast<double>(y_true.size());
}

MetricsReport evaluate(std::span<const RiskLabel> y_true, const Matrix& proba) {
  LabelVector predicted(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) predicted[i] = argmax_label(proba.row(i));
  MetricsReport r = classification_metrics(confusion_matrix(y_true, predicted));
  r.log_loss = log_loss(y_true, proba);
  r.has_log_loss = true;
  return r;
}

void to_json(nlohmann::json& j, const ConfusionMatrix& cm) {
  j = nlohmann::json::array();
  for (const auto& row : cm.counts()) j.push_back(row);
}

void from_json(const nlohmann::json& j, ConfusionMatrix& cm) {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};
  if (!j.is_array() || j.size() != kNumClasses) fail(ErrorCode::kParse, "confusion matrix must be 4x4");
  for (int r = 0; r < kNumClasses; ++r) {
    if (!j[r].is_array() || j[r].size() != kNumClasses) fail(ErrorCode::kParse, "confusion matrix must be 4x4");
    for (int c = 0; c < kNumClasses; ++c) counts[r][c] = j[r][c].get<std::uint64_t>();
  }
  cm = ConfusionMatrix(counts);
}

void to_json(nlohmann::json& j, const MetricsReport& r) {
  nlohmann::json per_class = nlohmann::json::object();
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& s = r.per_class[c];
    per_class[std::string(name(static_cast<RiskLabel>(c)))] = {
        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  j = nlohmann::json{{"accuracy", r.accuracy},
                     {"macro_recall", r.macro_recall},
                     {"macro_precision", r.macro_precision},
                     {"macro_f1", r.macro_f1},
                     {"log_loss", r.has_log_loss ? nlohmann::json(r.log_loss) : nlohmann::json()},
                     {"degenerate_constant_prediction", r.degenerate_constant_prediction},
                     {"per_class", std::move(per_class)},
                     {"confusion", r.confusion}};
}

void from_json(const nlohmann::json& j, MetricsReport& r) {
  r.accuracy = j.at("accuracy").get<double>();
  r.macro_recall = j.at("macro_recall").get<double>();
  r.macro_precision = j.at("macro_precision").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.has_log_loss = !j.at("log_loss").is_null();
  r.log_loss = r.has_log_loss ? j.at("log_loss").get<double>() : 0.0;
  r.degenerate_constant_prediction = j.at("degenerate_constant_prediction").get<bool>();
  r.confusion = j.at("confusion").get<ConfusionMatrix>();
  const auto& pc = j.at("per_class");
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& s = pc.at(std::string(name(static_cast<RiskLabel>(c))));
    r.per_class[c] = {s.at("precision").get<double>(), s.at("recall").get<double>(),
                      s.at("f1").get<double>(), s.at("support").get<std::uint64_t>()};
  }
}

}  // namespace fliplab

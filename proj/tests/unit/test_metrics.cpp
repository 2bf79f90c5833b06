#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>

#include "fliplab/error.hpp"
#include "fliplab/metrics.hpp"
#include "oracles.hpp"

namespace fliplab {
namespace {

using enum RiskLabel;

LabelVector random_labels(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(0, 3);
  LabelVector y(n);
  for (auto& l : y) l = label_from_code(d(rng));
  return y;
}

Matrix random_proba(std::mt19937_64& rng, std::size_t n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  Matrix p(static_cast<Eigen::Index>(n), kNumClasses);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (int c = 0; c < kNumClasses; ++c) p(i, c) = g(rng) + 1e-3;
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

TEST(Confusion, SmallExample) {
  const LabelVector t = {kLow, kLow, kNormal, kHigh, kHigh, kMedium};
  const LabelVector p = {kLow, kNormal, kNormal, kHigh, kLow, kHigh};
  const ConfusionMatrix cm = confusion_matrix(t, p);
  EXPECT_EQ(cm(0, 0), 1u);
  EXPECT_EQ(cm(0, 1), 1u);
  EXPECT_EQ(cm(3, 0), 1u);
  EXPECT_EQ(cm(2, 3), 1u);
  EXPECT_EQ(cm.total(), 6u);
  EXPECT_EQ(cm.trace(), 3u);
  const MetricsReport r = classification_metrics(cm);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  // Recall: LOW 1/2, NORMAL 1, MEDIUM 0, HIGH 1/2.
  EXPECT_DOUBLE_EQ(r.macro_recall, 0.5);
  // Precision: LOW 1/2, NORMAL 1/2, MEDIUM 0 (never predicted), HIGH 1/2.
  EXPECT_DOUBLE_EQ(r.macro_precision, 0.375);
  EXPECT_FALSE(r.degenerate_constant_prediction);
}

TEST(Confusion, ConstantPredictorClosedForms) {
  // 310 test rows, 75 of them HIGH, everything predicted HIGH.
  LabelVector t;
  t.insert(t.end(), 78, kLow);
  t.insert(t.end(), 77, kNormal);
  t.insert(t.end(), 80, kMedium);
  t.insert(t.end(), 75, kHigh);
  const LabelVector p(t.size(), kHigh);
  const MetricsReport r = classification_metrics(confusion_matrix(t, p));
  const auto forms = testing::collapse_forms(75.0 / 310.0);
  EXPECT_NEAR(r.accuracy, forms.accuracy, 1e-15);
  EXPECT_NEAR(r.macro_recall, forms.recall, 1e-15);
  EXPECT_NEAR(r.macro_precision, forms.precision, 1e-15);
  EXPECT_NEAR(r.macro_f1, forms.f1, 1e-15);
  EXPECT_NEAR(100 * r.accuracy, 24.19, 0.005);
  EXPECT_NEAR(100 * r.macro_precision, 6.05, 0.005);
  EXPECT_NEAR(100 * r.macro_f1, 9.74, 0.005);
  EXPECT_TRUE(r.degenerate_constant_prediction);
}

TEST(Confusion, MatchesBruteForceRecount) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const LabelVector t = random_labels(rng, n);
    const LabelVector p = random_labels(rng, n);
    const MetricsReport r = classification_metrics(confusion_matrix(t, p));
    const auto o = testing::recount(t, p);
    ASSERT_NEAR(r.accuracy, o.accuracy, 1e-12);
    ASSERT_NEAR(r.macro_recall, o.macro_recall, 1e-12);
    ASSERT_NEAR(r.macro_precision, o.macro_precision, 1e-12);
    ASSERT_NEAR(r.macro_f1, o.macro_f1, 1e-12);
  }
}

TEST(Confusion, Errors) {
  const LabelVector a = {kLow};
  const LabelVector b = {kLow, kHigh};
  try {
    confusion_matrix(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  EXPECT_THROW(confusion_matrix({}, {}), Error);
  EXPECT_THROW(classification_metrics(ConfusionMatrix{}), Error);
}

TEST(LogLoss, Anchors) {
  const LabelVector t = {kLow, kNormal, kMedium, kHigh, kHigh};
  EXPECT_NEAR(log_loss(t, Matrix::Constant(5, 4, 0.25)), std::log(4.0), 1e-9);
  Matrix onehot = Matrix::Zero(5, 4);
  for (int i = 0; i < 5; ++i) onehot(i, code(t[i])) = 1.0;
  EXPECT_LT(log_loss(t, onehot), 1e-14);
  Matrix wrong = Matrix::Zero(5, 4);
  for (int i = 0; i < 5; ++i) wrong(i, (code(t[i]) + 1) % 4) = 1.0;
  EXPECT_NEAR(log_loss(t, wrong), -std::log(1e-15), 1e-9);
  EXPECT_NEAR(log_loss(t, wrong), 34.539, 1e-3);
}

TEST(LogLoss, PerLabelTermsSumToTotal) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    const LabelVector t = random_labels(rng, n);
    const Matrix p = random_proba(rng, n);
    const auto terms = log_loss_per_label(t, p);
    EXPECT_NEAR(std::accumulate(terms.begin(), terms.end(), 0.0), log_loss(t, p), 1e-12);
  }
}

TEST(LogLoss, RejectsNonStochasticRows) {
  const LabelVector t = {kLow, kHigh};
  Matrix p = Matrix::Constant(2, 4, 0.25);
  p(1, 0) = 0.5;
  try {
    log_loss(t, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonStochasticRow);
  }
  Matrix neg = Matrix::Constant(2, 4, 0.25);
  neg(0, 0) = -0.25;
  neg(0, 1) = 0.75;
  EXPECT_THROW(log_loss(t, neg), Error);
  EXPECT_THROW(log_loss(t, Matrix::Constant(3, 4, 0.25)), Error);
}

TEST(LogLoss, PermutationInvariant) {
  std::mt19937_64 rng(9);
  const LabelVector t = random_labels(rng, 40);
  const Matrix p = random_proba(rng, 40);
  std::vector<std::size_t> order(40);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  LabelVector t2(40);
  Matrix p2(40, 4);
  for (std::size_t i = 0; i < 40; ++i) {
    t2[i] = t[order[i]];
    p2.row(static_cast<Eigen::Index>(i)) = p.row(static_cast<Eigen::Index>(order[i]));
  }
  EXPECT_NEAR(log_loss(t, p), log_loss(t2, p2), 1e-12);
}

TEST(LogLoss, DecreasesWhenMassMovesToTruth) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const LabelVector t = random_labels(rng, 10);
    Matrix p = random_proba(rng, 10);
    const double before = log_loss(t, p);
    const Eigen::Index i = static_cast<Eigen::Index>(rng() % 10);
    const int truth = code(t[i]);
    const int other = (truth + 1 + static_cast<int>(rng() % 3)) % 4;
    const double move = 0.5 * p(i, other);
    p(i, other) -= move;
    p(i, truth) += move;
    EXPECT_LT(log_loss(t, p), before);
  }
}

TEST(Evaluate, ConstantPredictorAlgebraOnRandomPrevalence) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + rng() % 300;
    LabelVector t = random_labels(rng, n);
    t[0] = kHigh;
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), 4);
    p.col(3).setOnes();
    const MetricsReport r = evaluate(t, p);
    double high = 0;
    for (RiskLabel l : t) high += l == kHigh ? 1 : 0;
    const auto f = testing::collapse_forms(high / static_cast<double>(n));
    EXPECT_NEAR(r.accuracy, f.accuracy, 1e-12);
    EXPECT_NEAR(r.macro_recall, f.recall, 1e-12);
    EXPECT_NEAR(r.macro_precision, f.precision, 1e-12);
    EXPECT_NEAR(r.macro_f1, f.f1, 1e-12);
    EXPECT_TRUE(r.degenerate_constant_prediction);
    EXPECT_NEAR(r.log_loss, (1.0 - f.accuracy) * -std::log(1e-15) - f.accuracy * std::log(1 - 1e-15), 1e-9);
  }
}

TEST(Evaluate, JsonRoundTrip) {
  std::mt19937_64 rng(3);
  const LabelVector t = random_labels(rng, 30);
  const MetricsReport r = evaluate(t, random_proba(rng, 30));
  const nlohmann::json j = r;
  const MetricsReport back = j.get<MetricsReport>();
  EXPECT_EQ(back.confusion, r.confusion);
  EXPECT_EQ(back.accuracy, r.accuracy);
  EXPECT_EQ(back.log_loss, r.log_loss);
  EXPECT_EQ(back.has_log_loss, true);
  EXPECT_EQ(back.per_class[2].support, r.per_class[2].support);
  EXPECT_EQ(nlohmann::json(back).dump(), j.dump());

  MetricsReport no_loss = classification_metrics(r.confusion);
  EXPECT_TRUE(nlohmann::json(no_loss).at("log_loss").is_null());
  EXPECT_FALSE(nlohmann::json(no_loss).get<MetricsReport>().has_log_loss);
}

}  // namespace
}  // namespace fliplab

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fliplab/error.hpp"
#include "fliplab/seed.hpp"
#include "fliplab/xai.hpp"

namespace fliplab {

namespace {

double accuracy(const LabelVector& truth, const LabelVector& pred) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == pred[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

ImportanceReport permutation_importance(const Classifier& model, const Matrix& x, const LabelVector& y,
                                        int n_repeats, std::uint64_t seed) {
  if (x.rows() == 0) fail(ErrorCode::kEmpty, "permutation importance needs at least one row");
  if (static_cast<std::size_t>(x.rows()) != y.size()) fail(ErrorCode::kLengthMismatch, "rows and labels differ");
  if (n_repeats < 1) fail(ErrorCode::kInvalidSpec, "n_repeats must be >= 1");

  const auto d = static_cast<std::size_t>(x.cols());
  const auto n = static_cast<std::size_t>(x.rows());
  ImportanceReport report;
  report.n_repeats = n_repeats;
  report.importances.assign(d, 0.0);
  report.stddev.assign(d, 0.0);
  report.per_repeat.assign(d, std::vector<double>(static_cast<std::size_t>(n_repeats), 0.0));

  const LabelVector base_pred = model.predict(x);
  report.baseline = accuracy(y, base_pred);
  if (std::all_of(base_pred.begin(), base_pred.end(), [&](RiskLabel l) { return l == base_pred.front(); })) {
    report.feasible = false;
    report.note = "all rows are predicted as " + std::string(name(base_pred.front())) +
                  "; shuffling cannot change any prediction";
    return report;
  }

  Matrix work = x;
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    for (int r = 0; r < n_repeats; ++r) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::mt19937_64 rng(derive_seed(seed, {j, static_cast<std::uint64_t>(r)}));
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < n; ++i) work(static_cast<Eigen::Index>(i), col) = x(static_cast<Eigen::Index>(perm[i]), col);
      report.per_repeat[j][static_cast<std::size_t>(r)] = report.baseline - accuracy(y, model.predict(work));
    }
    work.col(col) = x.col(col);
    const auto& vals = report.per_repeat[j];
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / n_repeats;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    report.importances[j] = mean;
    report.stddev[j] = std::sqrt(ss / n_repeats);
  }
  return report;
}

}  // namespace fliplab

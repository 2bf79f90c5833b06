#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fliplab/error.hpp"
#include "fliplab/seed.hpp"
#include "fliplab/xai.hpp"

namespace fliplab {

std::string_view name(LocalMethod method) { return method == LocalMethod::kShap ? "SHAP" : "LIME"; }

namespace {

Matrix instance_matrix(std::span<const double> instance) {
  Matrix m(1, static_cast<Eigen::Index>(instance.size()));
  for (std::size_t j = 0; j < instance.size(); ++j) m(0, static_cast<Eigen::Index>(j)) = instance[j];
  return m;
}

void check_inputs(const Classifier& model, std::span<const double> instance, const Matrix& background) {
  if (background.rows() == 0) fail(ErrorCode::kEmptyBackground, "background set is empty");
  if (instance.size() != model.num_features() || static_cast<std::size_t>(background.cols()) != instance.size()) {
    fail(ErrorCode::kSchemaMismatch, "instance, background and model widths differ");
  }
}

}  // namespace

Matrix sample_background(const Matrix& x, std::size_t n, std::uint64_t seed) {
  const auto rows = static_cast<std::size_t>(x.rows());
  if (rows == 0) fail(ErrorCode::kEmptyBackground, "cannot sample a background from zero rows");
  std::vector<std::size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n < rows) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, rows - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
  }
  Matrix out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

LocalExplanation shap_values(const Classifier& model, std::span<const double> instance, const Matrix& background,
                             const ShapOptions& options, std::uint64_t seed) {
  check_inputs(model, instance, background);
  const std::size_t d = instance.size();
  const auto nb = background.rows();
  if (options.exhaustive && d > 8) fail(ErrorCode::kInvalidSpec, "exhaustive Shapley enumeration needs d <= 8");
  if (!options.exhaustive && options.n_permutations < 1) fail(ErrorCode::kInvalidSpec, "n_permutations must be >= 1");

  LocalExplanation e;
  e.method = LocalMethod::kShap;
  e.instance.assign(instance.begin(), instance.end());
  const Matrix xrow = instance_matrix(instance);
  const Matrix px = model.predict_proba(xrow);
  e.explained_class = options.explained_class.value_or(argmax_label(px.row(0)));
  const int c = code(e.explained_class);
  e.model_output = px(0, c);
  e.base_value = model.predict_proba(background).col(c).mean();

  std::vector<std::vector<std::size_t>> perms;
  if (options.exhaustive) {
    std::vector<std::size_t> p(d);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  } else {
    for (int k = 0; k < options.n_permutations; ++k) {
      std::vector<std::size_t> p(d);
      std::iota(p.begin(), p.end(), std::size_t{0});
      std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
      std::shuffle(p.begin(), p.end(), rng);
      perms.push_back(std::move(p));
    }
  }

  const auto steps = static_cast<Eigen::Index>(d + 1);
  std::vector<double> sum(d, 0.0);
  std::vector<double> sum_sq(d, 0.0);
  Matrix walk(nb * steps, static_cast<Eigen::Index>(d));
  std::vector<double> phi(d);
  for (const auto& p : perms) {
    for (Eigen::Index b = 0; b < nb; ++b) {
      walk.row(b * steps) = background.row(b);
      for (std::size_t t = 0; t < d; ++t) {
        const Eigen::Index r = b * steps + static_cast<Eigen::Index>(t) + 1;
        walk.row(r) = walk.row(r - 1);
        walk(r, static_cast<Eigen::Index>(p[t])) = instance[p[t]];
      }
    }
    const Matrix proba = model.predict_proba(walk);
    std::fill(phi.begin(), phi.end(), 0.0);
    for (Eigen::Index b = 0; b < nb; ++b) {
      for (std::size_t t = 0; t < d; ++t) {
        const Eigen::Index r = b * steps + static_cast<Eigen::Index>(t) + 1;
        phi[p[t]] += proba(r, c) - proba(r - 1, c);
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double v = phi[j] / static_cast<double>(nb);
      sum[j] += v;
      sum_sq[j] += v * v;
    }
  }

  const auto np = static_cast<double>(perms.size());
  e.attributions.resize(d);
  e.standard_errors.assign(d, 0.0);
  double se_sq = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = sum[j] / np;
    e.attributions[j] = mean;
    // Exhaustive enumeration has no sampling error.
    if (!options.exhaustive && perms.size() > 1) {
      const double var = std::max(0.0, (sum_sq[j] - np * mean * mean) / (np - 1.0));
      e.standard_errors[j] = std::sqrt(var / np);
    }
    se_sq += e.standard_errors[j] * e.standard_errors[j];
  }
  e.standard_error = std::sqrt(se_sq);
  e.n_evaluations = perms.size() * static_cast<std::size_t>(nb * steps);
  return e;
}

std::vector<double> exact_shapley(const Classifier& model, std::span<const double> instance,
                                  const Matrix& background, RiskLabel explained_class) {
  check_inputs(model, instance, background);
  const std::size_t d = instance.size();
  if (d > 16) fail(ErrorCode::kInvalidSpec, "exact Shapley enumeration needs d <= 16");
  const std::size_t n_masks = std::size_t{1} << d;
  const auto nb = background.rows();
  const int c = code(explained_class);

  std::vector<double> value(n_masks);
  Matrix batch(nb, static_cast<Eigen::Index>(d));
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    batch = background;
    for (std::size_t j = 0; j < d; ++j) {
      if ((mask >> j) & 1u) batch.col(static_cast<Eigen::Index>(j)).setConstant(instance[j]);
    }
    value[mask] = model.predict_proba(batch).col(c).mean();
  }

  std::vector<double> weight(d);  // |S|! (d - |S| - 1)! / d!
  for (std::size_t s = 0; s < d; ++s) {
    weight[s] = std::exp(std::lgamma(static_cast<double>(s) + 1.0) + std::lgamma(static_cast<double>(d - s)) -
                         std::lgamma(static_cast<double>(d) + 1.0));
  }
  std::vector<double> phi(d, 0.0);
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
    for (std::size_t j = 0; j < d; ++j) {
      if ((mask >> j) & 1u) continue;
      phi[j] += weight[size] * (value[mask | (std::size_t{1} << j)] - value[mask]);
    }
  }
  return phi;
}

}  // namespace fliplab

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "fliplab/error.hpp"
#include "fliplab/xai.hpp"

namespace fliplab {

LocalExplanation lime_explain(const Classifier& model, std::span<const double> instance,
                              const ScalerParams& train_stats, const LimeOptions& options, std::uint64_t seed) {
  const std::size_t d = instance.size();
  if (options.n_samples < 50) fail(ErrorCode::kInvalidSpec, "LIME needs at least 50 samples");
  if (!(options.kernel_width > 0.0)) fail(ErrorCode::kInvalidSpec, "kernel_width must be > 0");
  if (d != model.num_features() || train_stats.size() != d) {
    fail(ErrorCode::kSchemaMismatch, "instance, scaler and model widths differ");
  }

  const auto n = static_cast<Eigen::Index>(options.n_samples);
  const auto dd = static_cast<Eigen::Index>(d);
  // Sample 0 is the instance itself.
  Matrix z = Matrix::Zero(n, dd);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < dd; ++j) z(i, j) = normal(rng);
  }
  Matrix xs(n, dd);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dd; ++j) {
      xs(i, j) = instance[static_cast<std::size_t>(j)] + train_stats.stddev[static_cast<std::size_t>(j)] * z(i, j);
    }
  }
  const Matrix proba = model.predict_proba(xs);

  LocalExplanation e;
  e.method = LocalMethod::kLime;
  e.instance.assign(instance.begin(), instance.end());
  e.explained_class = options.explained_class.value_or(argmax_label(proba.row(0)));
  const int c = code(e.explained_class);
  e.model_output = proba(0, c);
  const Vector y = proba.col(c);

  const double width_sq = options.kernel_width * options.kernel_width;
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = std::exp(-z.row(i).squaredNorm() / width_sq);

  Matrix design(n, dd + 1);
  design.col(0).setOnes();
  design.rightCols(dd) = z;
  const Matrix wd = design.array().colwise() * w.array();
  Matrix gram = design.transpose() * wd;
  const Vector rhs = wd.transpose() * y;

  Eigen::LDLT<Matrix> ldlt(gram);
  Vector beta;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-12) {
    beta = ldlt.solve(rhs);
  } else {
    e.ridge_fallback = true;
    const double ridge = 1e-8 * std::max(1.0, gram.diagonal().mean());
    for (Eigen::Index j = 1; j <= dd; ++j) gram(j, j) += ridge;
    beta = Eigen::LDLT<Matrix>(gram).solve(rhs);
  }

  e.base_value = beta(0);
  e.attributions.assign(beta.data() + 1, beta.data() + 1 + dd);

  const double w_sum = w.sum();
  const double y_bar = w.dot(y) / w_sum;
  const Vector resid = y - design * beta;
  const double ss_res = w.dot(resid.cwiseProduct(resid));
  const double ss_tot = w.dot((y.array() - y_bar).square().matrix());
  // A weighted spread below 1e-12 in probability is rounding noise: treat the target as constant.
  e.r_squared = ss_tot <= 1e-24 * w_sum ? 1.0 : 1.0 - ss_res / ss_tot;
  return e;
}

}  // namespace fliplab

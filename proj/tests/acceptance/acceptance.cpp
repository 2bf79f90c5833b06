// Acceptance checks; one PASS/FAIL line per criterion. Usage: fliplab_acceptance [output-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fliplab/data.hpp"
#include "fliplab/gbt.hpp"
#include "fliplab/harness.hpp"
#include "fliplab/metrics.hpp"
#include "fliplab/mlp.hpp"
#include "fliplab/tree.hpp"
#include "fliplab/xai.hpp"
#include "oracles.hpp"
#include "toy_models.hpp"

namespace fs = std::filesystem;
using namespace fliplab;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] C%d %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <typename F>
void guarded(int id, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LabelVector random_labels(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(0, kNumClasses - 1);
  LabelVector y(n);
  for (auto& l : y) l = label_from_code(d(rng));
  return y;
}

Matrix gaussian(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> nd;
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = nd(rng);
  }
  return x;
}

// Writes results, report and charts; returns the directory.
fs::path materialize(const ResultSet& rs, const fs::path& dir) {
  fs::remove_all(dir);
  write_results(dir, rs);
  render_report(rs, dir);
  render_charts(rs, dir / "charts");
  return dir;
}

// Compares every file except run_info.json; returns the first difference or "".
std::string tree_diff(const fs::path& a, const fs::path& b, std::size_t* compared) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file() && e.path().filename() != "run_info.json") files.push_back(fs::relative(e.path(), a));
  }
  std::size_t in_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file() && e.path().filename() != "run_info.json") ++in_b;
  }
  if (in_b != files.size()) return "file counts differ";
  std::sort(files.begin(), files.end());
  for (const auto& rel : files) {
    if (!fs::exists(b / rel)) return rel.string() + " missing";
    if (slurp(a / rel) != slurp(b / rel)) return rel.string() + " differs";
  }
  *compared = files.size();
  return "";
}

// ---- criteria ----

void c1_collapse_row() {
  guarded(1, "constant-collapse row", [] {
    SweepConfig c;
    c.scenarios = {FlipScenario::kS1ToHigh};
    c.rates = {0.75};
    const auto t0 = std::chrono::steady_clock::now();
    const ResultSet rs = sweep(c, 1);
    const double secs = seconds_since(t0);
    const Prepared p = prepare(c);
    const auto counts = p.split.test.class_counts();
    const double prev = static_cast<double>(counts[3]) / static_cast<double>(p.split.test.size());
    const auto forms = testing::collapse_forms(prev);
    bool ok = counts[3] == 75 && p.split.test.size() == 310 && rs.cells.size() == 6 && secs < 120.0;
    std::string worst;
    for (const CellResult& cell : rs.cells) {
      if (!cell.metrics) {
        ok = false;
        worst += std::string(name(cell.family)) + " failed; ";
        continue;
      }
      const MetricsReport& m = *cell.metrics;
      const double tol = 1e-4;  // 0.01 percentage points
      const bool cell_ok = std::abs(m.accuracy - forms.accuracy) <= tol &&
                           std::abs(m.macro_recall - forms.recall) <= tol &&
                           std::abs(m.macro_precision - forms.precision) <= tol &&
                           std::abs(m.macro_f1 - forms.f1) <= tol && m.degenerate_constant_prediction;
      if (!cell_ok) {
        ok = false;
        worst += std::string(name(cell.family)) + fmt(" acc %.4f; ", m.accuracy);
      }
    }
    report(1, ok, "constant-collapse row",
           "6 families at S1 75%: acc " + fmt("%.2f%%", 100 * forms.accuracy) + ", rec " +
               fmt("%.2f%%", 100 * forms.recall) + ", prec " + fmt("%.2f%%", 100 * forms.precision) + ", f1 " +
               fmt("%.2f%%", 100 * forms.f1) + ", test HIGH " + std::to_string(counts[3]) + "/" +
               std::to_string(p.split.test.size()) + ", " + fmt("%.1fs", secs) + (worst.empty() ? "" : "; " + worst));
  });
}

void c2_metric_oracle() {
  guarded(2, "metric oracle equivalence", [] {
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + rng() % 50;
      const LabelVector a = random_labels(rng, n);
      const LabelVector b = random_labels(rng, n);
      const MetricsReport r = classification_metrics(confusion_matrix(a, b));
      const auto o = testing::recount(a, b);
      worst = std::max({worst, std::abs(r.accuracy - o.accuracy), std::abs(r.macro_recall - o.macro_recall),
                        std::abs(r.macro_precision - o.macro_precision), std::abs(r.macro_f1 - o.macro_f1)});
    }
    report(2, worst <= 1e-12, "metric oracle equivalence", "1000 random pairs, max deviation " + fmt("%.3g", worst));
  });
}

void c3_log_loss_anchors() {
  guarded(3, "log-loss anchors", [] {
    std::mt19937_64 rng(3);
    const LabelVector y = random_labels(rng, 200);
    const double uniform = log_loss(y, Matrix::Constant(200, 4, 0.25));
    Matrix onehot = Matrix::Zero(200, 4);
    for (int i = 0; i < 200; ++i) onehot(i, code(y[i])) = 1.0;
    const double correct = log_loss(y, onehot);
    double worst_decomp = 0.0;
    std::gamma_distribution<double> g(1.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + rng() % 80;
      const LabelVector yt = random_labels(rng, n);
      Matrix p(static_cast<Eigen::Index>(n), 4);
      for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (int c = 0; c < 4; ++c) p(i, c) = g(rng);
        // Some exact zeros exercise the clipping path.
        if (rng() % 5 == 0) p(i, static_cast<Eigen::Index>(rng() % 4)) = 0.0;
        if (p.row(i).sum() == 0.0) p(i, 0) = 1.0;
        p.row(i) /= p.row(i).sum();
      }
      const auto terms = log_loss_per_label(yt, p);
      worst_decomp = std::max(worst_decomp, std::abs(std::accumulate(terms.begin(), terms.end(), 0.0) - log_loss(yt, p)));
    }
    const bool ok = std::abs(uniform - std::log(4.0)) <= 1e-9 && correct < 1e-14 && worst_decomp <= 1e-12;
    report(3, ok, "log-loss anchors",
           "uniform " + fmt("%.12f", uniform) + " (ln 4 = " + fmt("%.12f", std::log(4.0)) + "), one-hot " +
               fmt("%.3g", correct) + ", decomposition gap " + fmt("%.3g", worst_decomp));
  });
}

ResultSet c4_degradation(const fs::path& out) {
  ResultSet rs;
  guarded(4, "degradation trend", [&] {
    const SweepConfig c;
    const auto t0 = std::chrono::steady_clock::now();
    rs = sweep(c, 1);
    const double secs = seconds_since(t0);
    materialize(rs, out / "sweep_jobs1");
    bool ok = rs.failures() == 0 && secs < 600.0;
    std::string detail;
    double min_drop = 1.0;
    double worst_rise = 0.0;
    for (ModelFamily f : c.roster) {
      for (FlipScenario s : c.scenarios) {
        std::vector<double> acc;
        for (double r : c.rates) {
          const CellResult* cell = rs.find(f, s, r);
          acc.push_back(cell && cell->metrics ? cell->metrics->accuracy : std::nan(""));
        }
        for (std::size_t k = 1; k < acc.size(); ++k) {
          const double rise = acc[k] - acc[k - 1];
          worst_rise = std::max(worst_rise, rise);
          if (!(rise <= 0.02)) {
            ok = false;
            detail += std::string(name(f)) + "/" + std::string(name(s)) + " rises at " + fmt("%.2f; ", c.rates[k]);
          }
        }
        const double drop = acc.front() - acc.back();
        min_drop = std::min(min_drop, drop);
        if (!(drop >= 0.20)) {
          ok = false;
          detail += std::string(name(f)) + "/" + std::string(name(s)) + fmt(" drop %.3f; ", drop);
        }
      }
    }
    report(4, ok, "degradation trend",
           "12 curves, largest rise " + fmt("%.2f pp", 100 * worst_rise) + ", smallest 0->75% drop " +
               fmt("%.2f pp", 100 * min_drop) + ", full sweep " + fmt("%.1fs", secs) +
               (detail.empty() ? "" : "; " + detail));
  });
  return rs;
}

void c5_gradient_check() {
  guarded(5, "MLP gradient check", [] {
    std::mt19937_64 rng(5);
    const MlpNetwork net = MlpNetwork::initialize(25, 100, 11);
    const Matrix x = gaussian(rng, 10, 25);
    const LabelVector y = random_labels(rng, 10);
    Vector analytic;
    net.loss_and_gradient(x, y, &analytic);
    Vector theta = net.flat_parameters();
    MlpNetwork probe = net;
    const double h = 1e-5;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double saved = theta[k];
      theta[k] = saved + h;
      probe.set_flat_parameters(theta);
      const double up = probe.loss_and_gradient(x, y, nullptr);
      theta[k] = saved - h;
      probe.set_flat_parameters(theta);
      const double down = probe.loss_and_gradient(x, y, nullptr);
      theta[k] = saved;
      const double numeric = (up - down) / (2 * h);
      const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(analytic[k] - numeric) / denom);
    }
    report(5, worst <= 1e-4, "MLP gradient check",
           std::to_string(theta.size()) + " parameters of a 25-100-4 net on 10 rows, max relative error " +
               fmt("%.3g", worst));
  });
}

void c6_newton_leaf() {
  guarded(6, "GBT Newton leaf", [] {
    std::mt19937_64 rng(6);
    const Matrix x = gaussian(rng, 80, 25);
    const LabelVector y = random_labels(rng, 80);
    GbtParams p;
    p.n_rounds = 1;
    p.max_depth = 0;
    p.learning_rate = 1.0;
    p.lambda = 1.7;
    const GbtModel m = GbtModel::fit(x, y, p);
    const auto base = log_prior_margin(y);
    Eigen::RowVector4d prior;
    for (int c = 0; c < 4; ++c) prior[c] = std::exp(base[c]);
    prior /= prior.sum();
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
      double g = 0.0;
      double h = 0.0;
      for (RiskLabel l : y) {
        g += prior[c] - (code(l) == c ? 1.0 : 0.0);
        h += prior[c] * (1.0 - prior[c]);
      }
      const double leaf = m.rounds()[0][c].nodes()[0].value;
      worst = std::max(worst, std::abs(leaf - (-g / (h + p.lambda))));
    }
    report(6, worst <= 1e-9, "GBT Newton leaf",
           "one-leaf round on 80 rows, lambda 1.7, max |leaf - (-G/(H+lambda))| " + fmt("%.3g", worst));
  });
}

void c7_shap() {
  guarded(7, "SHAP exactness", [] {
    double worst_exact = 0.0;
    int models = 0;
    for (int d = 2; d <= 8; ++d) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(100 + d));
      // Random two-layer tanh scorer under a softmax: far from additive.
      const Matrix w1 = gaussian(rng, 6, d);
      const Matrix w2 = gaussian(rng, 4, 6);
      const testing::FunctionModel m(static_cast<std::size_t>(d), [w1, w2, d](const double* x) {
        Eigen::VectorXd hidden(6);
        for (int k = 0; k < 6; ++k) {
          double s = 0.0;
          for (int j = 0; j < d; ++j) s += w1(k, j) * x[j];
          hidden[k] = std::tanh(s);
        }
        Matrix logits(1, 4);
        for (int c = 0; c < 4; ++c) logits(0, c) = w2.row(c).dot(hidden.transpose());
        return Eigen::RowVector4d(softmax_rows(logits).row(0));
      });
      const Matrix bg = gaussian(rng, 3, d);
      const Matrix inst = gaussian(rng, 1, d);
      for (RiskLabel c : kAllLabels) {
        ShapOptions opts;
        opts.exhaustive = true;
        opts.explained_class = c;
        const LocalExplanation e = shap_values(m, std::span(inst.data(), d), bg, opts, 0);
        const std::vector<double> ref = exact_shapley(m, std::span(inst.data(), d), bg, c);
        for (int j = 0; j < d; ++j) worst_exact = std::max(worst_exact, std::abs(e.attributions[j] - ref[j]));
        ++models;
      }
    }

    // Additivity on the trained pipeline: GBT on the clean split, raw band-power instances.
    const SweepConfig cfg;
    const Prepared p = prepare(cfg);
    const TrainedModel model = train_cell_model(cfg, p, ModelFamily::kGbt, FlipScenario::kS2Rotate, 0.0);
    const Matrix background = sample_background(p.split.train.features(), 50, 1);
    double worst_ratio = 0.0;
    double worst_gap = 0.0;
    int within = 0;
    const int n_instances = 100;
    for (int i = 0; i < n_instances; ++i) {
      ShapOptions opts;
      opts.n_permutations = 8;
      const Matrix row = p.split.test.features().row(i);
      const LocalExplanation e = shap_values(model, std::span(row.data(), kNumFeatures), background, opts,
                                             static_cast<std::uint64_t>(i));
      double total = e.base_value;
      for (double v : e.attributions) total += v;
      const double gap = std::abs(total - e.model_output);
      worst_gap = std::max(worst_gap, gap);
      // Allowance of 1e-12 for floating-point summation when the sampling error is zero.
      if (gap <= 4.0 * e.standard_error + 1e-12) ++within;
      if (e.standard_error > 0) worst_ratio = std::max(worst_ratio, gap / e.standard_error);
    }
    const bool ok = worst_exact <= 1e-9 && within == n_instances;
    report(7, ok, "SHAP exactness",
           std::to_string(models) + " toy models (d=2..8) full enumeration vs subset formula, max deviation " +
               fmt("%.3g", worst_exact) + "; additivity on " + std::to_string(within) + "/" +
               std::to_string(n_instances) + " GBT instances within 4 SE, max gap " + fmt("%.3g", worst_gap) +
               " (" + fmt("%.3g", worst_ratio) + " SE)");
  });
}

void c8_importance_null() {
  guarded(8, "permutation-importance null", [] {
    const SweepConfig cfg;
    const Prepared p = prepare(cfg);
    const Matrix x = p.scaler.transform(p.split.test.features());
    // Hand-built tree reading only features 0 and 6.
    std::vector<TreeNode> nodes(5);
    nodes[0] = {0, 0.0, 1, 2, 0, {}};
    nodes[1].distribution = {1, 0, 0, 0};
    nodes[2] = {6, 0.3, 3, 4, 0, {}};
    nodes[3].distribution = {0, 0, 1, 0};
    nodes[4].distribution = {0, 0, 0, 1};
    const TreeClassifier teacher(DecisionTree(nodes), kNumFeatures);
    const LabelVector y_teacher = teacher.predict(x);
    const ImportanceReport full = permutation_importance(teacher, x, y_teacher, 20, 3);
    bool zero = true;
    for (int j = 0; j < kNumFeatures; ++j) {
      if (j == 0 || j == 6) continue;
      for (double v : full.per_repeat[j]) zero = zero && v == 0.0;
    }

    // A single split on feature 0 determines the label; shuffling keeps a row with prob sum_c p_c^2.
    std::vector<TreeNode> stump(3);
    stump[0] = {0, 0.0, 1, 2, 0, {}};
    stump[1].distribution = {0, 1, 0, 0};
    stump[2].distribution = {0, 0, 0, 1};
    const TreeClassifier model(DecisionTree(stump), kNumFeatures);
    const LabelVector y = model.predict(x);
    double share = 0.0;
    for (RiskLabel l : y) share += l == RiskLabel::kHigh ? 1.0 : 0.0;
    share /= static_cast<double>(y.size());
    const double expected = 1.0 - (share * share + (1 - share) * (1 - share));
    const int repeats = 200;
    const ImportanceReport r = permutation_importance(model, x, y, repeats, 8);
    const double sigma = r.stddev[0] / std::sqrt(static_cast<double>(repeats));
    const double z = sigma > 0 ? std::abs(r.importances[0] - expected) / sigma : INFINITY;
    report(8, zero && z <= 3.0, "permutation-importance null",
           std::string("23 unused features ") + (zero ? "exactly 0 in all 20 repeats" : "NOT all zero") +
               "; determining feature " + fmt("%.4f", r.importances[0]) + " vs analytic " + fmt("%.4f", expected) +
               " (" + fmt("%.2f", z) + " sigma)");
  });
}

void c9_lime() {
  guarded(9, "LIME linear recovery", [] {
    const int d = kNumFeatures;
    double worst_cos = 1.0;
    double worst_r2 = 1.0;
    for (int trial = 0; trial < 4; ++trial) {
      std::mt19937_64 rng(900 + static_cast<std::uint64_t>(trial));
      const int cls = trial % 4;
      Matrix w = Matrix::Zero(4, d);
      std::normal_distribution<double> nd;
      // Logit spread of about 0.1 over the perturbation cloud keeps the softmax near its tangent.
      for (int j = 0; j < d; ++j) w(cls, j) = 0.02 * nd(rng);
      const testing::FunctionModel m = testing::linear_softmax(w, Eigen::Vector4d::Zero());
      std::vector<double> inst(d);
      for (double& v : inst) v = 0.5 * nd(rng);
      LimeOptions opts;
      opts.explained_class = label_from_code(cls);
      const LocalExplanation e = lime_explain(m, inst, ScalerParams::identity(d), opts, 17);
      double dot = 0, na = 0, nw = 0;
      for (int j = 0; j < d; ++j) {
        dot += e.attributions[j] * w(cls, j);
        na += e.attributions[j] * e.attributions[j];
        nw += w(cls, j) * w(cls, j);
      }
      worst_cos = std::min(worst_cos, dot / std::sqrt(na * nw));
      worst_r2 = std::min(worst_r2, e.r_squared);
    }
    report(9, worst_cos > 0.99 && worst_r2 > 0.99, "LIME linear recovery",
           "4 linear-softmax models (d=25), min cosine " + fmt("%.5f", worst_cos) + ", min weighted R^2 " +
               fmt("%.5f", worst_r2));
  });
}

void c10_surrogate() {
  guarded(10, "surrogate fidelity", [] {
    std::mt19937_64 rng(10);
    const Matrix x = gaussian(rng, 500, kNumFeatures);
    std::vector<TreeNode> nodes(7);
    nodes[0] = {3, 0.2, 1, 4, 0, {}};
    nodes[1] = {7, -0.5, 2, 3, 0, {}};
    nodes[2].distribution = {1, 0, 0, 0};
    nodes[3].distribution = {0, 1, 0, 0};
    nodes[4] = {12, 0.8, 5, 6, 0, {}};
    nodes[5].distribution = {0, 0, 1, 0};
    nodes[6].distribution = {0, 0, 0, 1};
    const TreeClassifier teacher(DecisionTree(nodes), kNumFeatures);
    const double recovered = surrogate_tree(teacher, x, 2).fidelity;

    const SweepConfig cfg;
    const Prepared p = prepare(cfg);
    const TrainedModel rf = train_cell_model(cfg, p, ModelFamily::kRandomForest, FlipScenario::kS2Rotate, 0.25);
    const Matrix& train = p.split.train.features();
    bool monotone = true;
    std::string curve;
    double last = 0.0;
    for (int depth = 1; depth <= 8; ++depth) {
      const double f = surrogate_tree(rf, train, depth).fidelity;
      monotone = monotone && f >= last;
      last = f;
      curve += fmt(depth == 1 ? "%.3f" : " %.3f", f);
    }
    report(10, recovered == 1.0 && monotone, "surrogate fidelity",
           "depth-2 teacher recovered at " + fmt("%.3f", recovered) + "; RF (S2 25%) fidelity by depth 1..8: " + curve);
  });
}

void c11_determinism(const ResultSet& first, const fs::path& out) {
  guarded(11, "determinism", [&] {
    std::size_t compared = 0;
    const fs::path a = out / "sweep_jobs1";
    const fs::path b = materialize(sweep(SweepConfig{}, 2), out / "sweep_jobs2");
    std::string diff = first.cells.empty() ? "first sweep missing" : tree_diff(a, b, &compared);

    // Same comparison with every explanation method switched on.
    SweepConfig ex;
    ex.rates = {0.0, 0.5, 0.75};
    ex.explain.importance = ex.explain.shap = ex.explain.lime = ex.explain.surrogate = true;
    ex.explain.shap_permutations = 4;
    ex.explain.background_size = 20;
    ex.explain.lime_samples = 300;
    std::size_t compared_ex = 0;
    const fs::path ea = materialize(sweep(ex, 1), out / "explain_jobs1");
    const fs::path eb = materialize(sweep(ex, 3), out / "explain_jobs3");
    if (diff.empty()) diff = tree_diff(ea, eb, &compared_ex);
    report(11, diff.empty(), "determinism",
           diff.empty() ? std::to_string(compared) + " files identical for jobs 1 vs 2 (default sweep), " +
                              std::to_string(compared_ex) + " identical for jobs 1 vs 3 (explanations on)"
                        : diff);
  });
}

void c12_contrast(const fs::path& out) {
  guarded(12, "scenario contrast", [&] {
    const fs::path file = out / "sweep_jobs1" / "scenario_contrast.csv";
    std::istringstream in(slurp(file));
    std::string line;
    std::getline(in, line);
    const bool header_ok = line == "model,rate,s1_log_loss,s2_log_loss,s1_minus_s2,s1_ge_s2";
    int rows = 0;
    int consistent = 0;
    int holds = 0;
    std::string per_family;
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) f.push_back(cell);
      if (f.size() != 6) continue;
      ++rows;
      const double s1 = std::stod(f[2]);
      const double s2 = std::stod(f[3]);
      if ((s1 >= s2) == (f[5] == "yes")) ++consistent;
      if (f[5] == "yes") ++holds;
      per_family += " " + f[0] + fmt(" %.3f", s1) + fmt("/%.3f", s2);
    }
    // The direction itself is recorded, not asserted.
    report(12, header_ok && rows == 6 && consistent == 6, "scenario contrast",
           "S1>=S2 at 50% for " + std::to_string(holds) + "/6 families;" + per_family);
  });
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fliplab_acceptance";
  fs::create_directories(out);
  c1_collapse_row();
  c2_metric_oracle();
  c3_log_loss_anchors();
  const ResultSet sweep1 = c4_degradation(out);
  c5_gradient_check();
  c6_newton_leaf();
  c7_shap();
  c8_importance_null();
  c9_lime();
  c10_surrogate();
  c11_determinism(sweep1, out);
  c12_contrast(out);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

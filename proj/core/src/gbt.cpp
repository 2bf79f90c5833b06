#include "fliplab/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

void GbtParams::validate() const {
  if (n_rounds < 1) fail(ErrorCode::kInvalidSpec, "n_rounds must be >= 1");
  if (max_depth < 0) fail(ErrorCode::kInvalidSpec, "max_depth must be >= 0");
  if (!(learning_rate > 0.0)) fail(ErrorCode::kInvalidSpec, "learning_rate must be > 0");
  if (!(lambda >= 0.0)) fail(ErrorCode::kInvalidSpec, "lambda must be >= 0");
  if (!(min_child_weight >= 0.0)) fail(ErrorCode::kInvalidSpec, "min_child_weight must be >= 0");
}

// ---- RegressionTree ----

RegressionTree::RegressionTree(std::vector<RegressionNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) fail(ErrorCode::kInvalidSpec, "regression tree needs a node");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t i = 0; i < n; ++i) {
    const auto& node = nodes_[i];
    if (!node.is_leaf() && (node.left <= i || node.right <= i || node.left >= n || node.right >= n)) {
      fail(ErrorCode::kInvalidSpec, "regression node " + std::to_string(i) + " has invalid children");
    }
  }
}

double RegressionTree::predict(const double* row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(row[node.feature] <= node.threshold ? node.left : node.right);
  }
  return nodes_[i].value;
}

RegressionTree RegressionTree::scaled(double factor) const {
  std::vector<RegressionNode> nodes = nodes_;
  for (auto& n : nodes) {
    if (n.is_leaf()) n.value *= factor;
  }
  return RegressionTree(std::move(nodes));
}

// ---- Newton tree growth (level-wise exact greedy over presorted columns) ----

RegressionTree grow_newton_tree(const Matrix& x, std::span<const double> grad,
                                std::span<const double> hess, const NewtonTreeOptions& options) {
  const std::size_t n = grad.size();
  if (hess.size() != n || static_cast<std::size_t>(x.rows()) != n) {
    fail(ErrorCode::kLengthMismatch, "gradient, hessian and feature rows must agree");
  }
  if (n == 0) fail(ErrorCode::kEmpty, "cannot grow a tree on zero rows");
  const auto d = static_cast<int>(x.cols());
  const double lambda = options.lambda;

  std::vector<std::vector<std::uint32_t>> order(static_cast<std::size_t>(d));
  for (int f = 0; f < d; ++f) {
    auto& o = order[f];
    o.resize(n);
    std::iota(o.begin(), o.end(), 0u);
    std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, f) < x(b, f); });
  }

  std::vector<RegressionNode> nodes(1);
  std::vector<std::int32_t> node_of(n, 0);  // -1 once the row's node is final
  std::vector<double> node_g(1, 0.0);
  std::vector<double> node_h(1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    node_g[0] += grad[i];
    node_h[0] += hess[i];
  }

  auto leaf_weight = [&](double g, double h) { return -g / (h + lambda); };
  auto score = [&](double g, double h) { return g * g / (h + lambda); };

  std::vector<std::int32_t> active = {0};
  for (int depth = 0; !active.empty(); ++depth) {
    std::vector<std::int32_t> slot(nodes.size(), -1);
    for (std::size_t s = 0; s < active.size(); ++s) slot[active[s]] = static_cast<std::int32_t>(s);

    struct Best {
      double gain = 0.0;
      int feature = -1;
      double threshold = 0.0;
    };
    std::vector<Best> best(active.size());

    if (depth < options.max_depth) {
      std::vector<double> gl(active.size());
      std::vector<double> hl(active.size());
      std::vector<double> last(active.size());
      std::vector<char> seen(active.size());
      for (int f = 0; f < d; ++f) {
        std::fill(gl.begin(), gl.end(), 0.0);
        std::fill(hl.begin(), hl.end(), 0.0);
        std::fill(seen.begin(), seen.end(), 0);
        for (std::uint32_t i : order[f]) {
          const std::int32_t node = node_of[i];
          if (node < 0) continue;
          const std::int32_t s = slot[node];
          if (s < 0) continue;
          const double v = x(i, f);
          if (seen[s] && v > last[s]) {
            const double g = node_g[node];
            const double h = node_h[node];
            const double gr = g - gl[s];
            const double hr = h - hl[s];
            if (hl[s] >= options.min_child_weight && hr >= options.min_child_weight) {
              const double gain = 0.5 * (score(gl[s], hl[s]) + score(gr, hr) - score(g, h));
              // Gains this close come from the same partition summed in a different order.
              if (gain > best[s].gain + 1e-10 * std::max(1.0, std::abs(best[s].gain))) {
                double t = 0.5 * (last[s] + v);
                if (!(t < v)) t = last[s];
                best[s] = {gain, f, t};
              }
            }
          }
          gl[s] += grad[i];
          hl[s] += hess[i];
          last[s] = v;
          seen[s] = 1;
        }
      }
    }

    std::vector<std::int32_t> next;
    for (std::size_t s = 0; s < active.size(); ++s) {
      const std::int32_t id = active[s];
      if (best[s].feature < 0) {
        nodes[id].value = leaf_weight(node_g[id], node_h[id]);
        continue;
      }
      const auto left = static_cast<std::int32_t>(nodes.size());
      nodes[id].feature = best[s].feature;
      nodes[id].threshold = best[s].threshold;
      nodes[id].left = left;
      nodes[id].right = left + 1;
      nodes.emplace_back();
      nodes.emplace_back();
      node_g.resize(nodes.size(), 0.0);
      node_h.resize(nodes.size(), 0.0);
      next.push_back(left);
      next.push_back(left + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::int32_t node = node_of[i];
      if (node < 0) continue;
      if (nodes[node].is_leaf()) {
        node_of[i] = -1;
        continue;
      }
      const std::int32_t child = x(static_cast<Eigen::Index>(i), nodes[node].feature) <= nodes[node].threshold
                                     ? nodes[node].left
                                     : nodes[node].right;
      node_of[i] = child;
      node_g[child] += grad[i];
      node_h[child] += hess[i];
    }
    active = std::move(next);
  }

  return RegressionTree(std::move(nodes));
}

void softmax_grad_hess(const Matrix& margins, const LabelVector& y, int cls, std::vector<double>& grad,
                       std::vector<double>& hess) {
  const Matrix p = softmax_rows(margins);
  grad.resize(y.size());
  hess.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double pi = p(static_cast<Eigen::Index>(i), cls);
    grad[i] = pi - (code(y[i]) == cls ? 1.0 : 0.0);
    hess[i] = std::max(pi * (1.0 - pi), 1e-16);
  }
}

Matrix softmax_rows(const Matrix& margins) {
  Matrix p(margins.rows(), margins.cols());
  for (Eigen::Index i = 0; i < margins.rows(); ++i) {
    const double m = margins.row(i).maxCoeff();
    p.row(i) = (margins.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

std::array<double, kNumClasses> log_prior_margin(const LabelVector& y) {
  std::array<double, kNumClasses> counts{};
  for (RiskLabel l : y) counts[code(l)] += 1.0;
  std::array<double, kNumClasses> margin{};
  for (int c = 0; c < kNumClasses; ++c) {
    margin[c] = std::log(std::max(counts[c] / static_cast<double>(y.size()), kPriorFloor));
  }
  return margin;
}

// ---- GbtModel ----

GbtModel::GbtModel(std::array<double, kNumClasses> base_margin,
                   std::vector<std::array<RegressionTree, kNumClasses>> rounds, std::size_t n_features)
    : base_margin_(base_margin), rounds_(std::move(rounds)), n_features_(n_features) {}

GbtModel GbtModel::fit(const Matrix& x, const LabelVector& y, const GbtParams& params) {
  params.validate();
  const std::size_t n = y.size();
  if (n == 0) fail(ErrorCode::kEmpty, "empty training set");
  const auto base = log_prior_margin(y);

  Matrix margin(static_cast<Eigen::Index>(n), kNumClasses);
  for (int c = 0; c < kNumClasses; ++c) margin.col(c).setConstant(base[c]);

  NewtonTreeOptions options{params.max_depth, params.lambda, params.min_child_weight};
  std::vector<std::array<RegressionTree, kNumClasses>> rounds;
  rounds.reserve(static_cast<std::size_t>(params.n_rounds));
  std::vector<double> grad;
  std::vector<double> hess;
  for (int r = 0; r < params.n_rounds; ++r) {
    std::array<RegressionTree, kNumClasses> trees;
    for (int c = 0; c < kNumClasses; ++c) {
      softmax_grad_hess(margin, y, c, grad, hess);
      trees[c] = grow_newton_tree(x, grad, hess, options).scaled(params.learning_rate);
    }
    // All class trees of a round see the margins from the start of the round.
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = x.row(static_cast<Eigen::Index>(i)).data();
      for (int c = 0; c < kNumClasses; ++c) margin(static_cast<Eigen::Index>(i), c) += trees[c].predict(row);
    }
    rounds.push_back(std::move(trees));
  }
  return GbtModel(base, std::move(rounds), static_cast<std::size_t>(x.cols()));
}

Matrix GbtModel::margins(const Matrix& features) const {
  check_schema(features);
  Matrix m(features.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double* row = features.row(i).data();
    for (int c = 0; c < kNumClasses; ++c) {
      double s = base_margin_[c];
      for (const auto& trees : rounds_) s += trees[c].predict(row);
      m(i, c) = s;
    }
  }
  return m;
}

Matrix GbtModel::predict_proba(const Matrix& features) const { return softmax_rows(margins(features)); }

namespace {

nlohmann::json tree_json(const RegressionTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes()) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
  return nodes;
}

RegressionTree tree_from_json(const nlohmann::json& j) {
  std::vector<RegressionNode> nodes;
  for (const auto& a : j) {
    nodes.push_back({a.at(0).get<std::int32_t>(), a.at(1).get<double>(), a.at(2).get<std::int32_t>(),
                     a.at(3).get<std::int32_t>(), a.at(4).get<double>()});
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace

nlohmann::json GbtModel::to_json() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& trees : rounds_) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& t : trees) r.push_back(tree_json(t));
    rounds.push_back(std::move(r));
  }
  return {{"n_features", n_features_}, {"base_margin", base_margin_}, {"rounds", std::move(rounds)}};
}

GbtModel GbtModel::from_json(const nlohmann::json& j) {
  std::vector<std::array<RegressionTree, kNumClasses>> rounds;
  for (const auto& r : j.at("rounds")) {
    if (r.size() != kNumClasses) fail(ErrorCode::kParse, "GBT round must hold one tree per class");
    std::array<RegressionTree, kNumClasses> trees;
    for (int c = 0; c < kNumClasses; ++c) trees[c] = tree_from_json(r.at(c));
    rounds.push_back(std::move(trees));
  }
  return GbtModel(j.at("base_margin").get<std::array<double, kNumClasses>>(), std::move(rounds),
                  j.at("n_features").get<std::size_t>());
}

void to_json(nlohmann::json& j, const GbtParams& p) {
  j = nlohmann::json{{"n_rounds", p.n_rounds},
                     {"max_depth", p.max_depth},
                     {"learning_rate", p.learning_rate},
                     {"lambda", p.lambda},
                     {"min_child_weight", p.min_child_weight}};
}

void from_json(const nlohmann::json& j, GbtParams& p) {
  p.n_rounds = j.value("n_rounds", p.n_rounds);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.lambda = j.value("lambda", p.lambda);
  p.min_child_weight = j.value("min_child_weight", p.min_child_weight);
}

}  // namespace fliplab

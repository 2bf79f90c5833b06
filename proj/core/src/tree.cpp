#include "fliplab/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

// ---- Classifier helpers (shared by every model) ----

void Classifier::check_schema(const Matrix& features) const {
  if (static_cast<std::size_t>(features.cols()) != num_features()) {
    fail(ErrorCode::kSchemaMismatch, "model expects " + std::to_string(num_features()) +
                                         " features, input has " + std::to_string(features.cols()));
  }
}

LabelVector Classifier::predict(const Matrix& features) const {
  return argmax_rows(predict_proba(features));
}

LabelVector argmax_rows(const Matrix& proba) {
  LabelVector out(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) out[i] = argmax_label(proba.row(i));
  return out;
}

// ---- DecisionTree ----

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) fail(ErrorCode::kInvalidSpec, "decision tree needs at least one node");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t i = 0; i < n; ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n) {
      fail(ErrorCode::kInvalidSpec, "tree node " + std::to_string(i) + " has invalid children");
    }
  }
}

std::size_t DecisionTree::leaf_index(const double* row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& node = nodes_[i];
    i = static_cast<std::size_t>(row[node.feature] <= node.threshold ? node.left : node.right);
  }
  return i;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return best;
}

int DecisionTree::max_feature() const {
  int best = -1;
  for (const TreeNode& n : nodes_) best = std::max(best, static_cast<int>(n.feature));
  return best;
}

// ---- growth ----

namespace {

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum over children of (sum_c w_c^2) / W; larger is purer
};

class Grower {
 public:
  Grower(const Matrix& x, std::span<const RiskLabel> y, std::span<const double> w,
         const TreeGrowOptions& options, std::mt19937_64& rng)
      : x_(x), y_(y), w_(w), options_(options), rng_(rng) {
    features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(features_.begin(), features_.end(), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (weight(i) > 0.0) rows_.push_back(i);
    }
    scratch_.reserve(rows_.size());
  }

  std::vector<TreeNode> run() {
    if (rows_.empty()) {
      TreeNode leaf;
      leaf.distribution.fill(1.0 / kNumClasses);
      return {leaf};
    }
    build(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  double weight(std::size_t i) const { return w_.empty() ? 1.0 : w_[i]; }

  std::int32_t build(std::size_t begin, std::size_t end, int depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();

    std::array<double, kNumClasses> cw{};
    for (std::size_t k = begin; k < end; ++k) cw[code(y_[rows_[k]])] += weight(rows_[k]);
    const double total = std::accumulate(cw.begin(), cw.end(), 0.0);
    {
      TreeNode& node = nodes_[id];
      node.n_samples = static_cast<std::uint32_t>(end - begin);
      for (int c = 0; c < kNumClasses; ++c) node.distribution[c] = cw[c] / total;
    }

    const std::size_t n = end - begin;
    const int nonzero = static_cast<int>(std::count_if(cw.begin(), cw.end(), [](double v) { return v > 0; }));
    if (nonzero <= 1 || (options_.max_depth >= 0 && depth >= options_.max_depth) ||
        n < options_.min_samples_split || n < 2 * options_.min_samples_leaf) {
      return id;
    }

    const Candidate best = find_split(begin, end);
    if (best.feature < 0) return id;

    const auto mid_it = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin), rows_.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::size_t r) { return x_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold; });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());

    const std::int32_t left = build(begin, mid, depth + 1);
    const std::int32_t right = build(mid, end, depth + 1);
    TreeNode& node = nodes_[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Candidate find_split(std::size_t begin, std::size_t end) {
    const int d = static_cast<int>(features_.size());
    const int budget = options_.max_features > 0 ? std::min(options_.max_features, d) : d;
    if (budget < d) std::shuffle(features_.begin(), features_.end(), rng_);

    Candidate best;
    int visited = 0;
    for (int k = 0; k < d && (visited < budget || best.feature < 0); ++k) {
      const int f = features_[k];
      const bool informative = options_.random_thresholds ? try_random(f, begin, end, best)
                                                          : try_exhaustive(f, begin, end, best);
      if (informative) ++visited;
    }
    // Restore canonical order so the next node's shuffle does not depend on visit history.
    if (budget < d) std::sort(features_.begin(), features_.end());
    return best;
  }

  static double purity(const std::array<double, kNumClasses>& cw, double total) {
    double s = 0.0;
    for (double v : cw) s += v * v;
    return s / total;
  }

  // Returns false when the feature is constant within the node.
  bool try_exhaustive(int f, std::size_t begin, std::size_t end, Candidate& best) {
    scratch_.clear();
    for (std::size_t k = begin; k < end; ++k) {
      scratch_.emplace_back(x_(static_cast<Eigen::Index>(rows_[k]), f), rows_[k]);
    }
    std::sort(scratch_.begin(), scratch_.end());
    if (scratch_.front().first == scratch_.back().first) return false;

    std::array<double, kNumClasses> total{};
    for (const auto& [v, r] : scratch_) total[code(y_[r])] += weight(r);
    std::array<double, kNumClasses> left{};
    double wl = 0.0;
    double wt = std::accumulate(total.begin(), total.end(), 0.0);
    const std::size_t n = scratch_.size();
    const std::size_t min_leaf = options_.min_samples_leaf;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t r = scratch_[k].second;
      left[code(y_[r])] += weight(r);
      wl += weight(r);
      if (scratch_[k].first == scratch_[k + 1].first) continue;
      if (k + 1 < min_leaf || n - (k + 1) < min_leaf) continue;
      std::array<double, kNumClasses> right{};
      for (int c = 0; c < kNumClasses; ++c) right[c] = total[c] - left[c];
      const double wr = wt - wl;
      if (wl <= 0.0 || wr <= 0.0) continue;
      const double score = purity(left, wl) + purity(right, wr);
      if (score > best.score) {
        double t = 0.5 * (scratch_[k].first + scratch_[k + 1].first);
        if (!(t < scratch_[k + 1].first)) t = scratch_[k].first;
        best = {f, t, score};
      }
    }
    return true;
  }

  bool try_random(int f, std::size_t begin, std::size_t end, Candidate& best) {
    double lo = x_(static_cast<Eigen::Index>(rows_[begin]), f);
    double hi = lo;
    for (std::size_t k = begin + 1; k < end; ++k) {
      const double v = x_(static_cast<Eigen::Index>(rows_[k]), f);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi) return false;
    std::uniform_real_distribution<double> uniform(lo, hi);
    const double t = uniform(rng_);
    std::array<double, kNumClasses> left{};
    std::array<double, kNumClasses> right{};
    std::size_t nl = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t r = rows_[k];
      if (x_(static_cast<Eigen::Index>(r), f) <= t) {
        left[code(y_[r])] += weight(r);
        ++nl;
      } else {
        right[code(y_[r])] += weight(r);
      }
    }
    const std::size_t nr = (end - begin) - nl;
    if (nl < std::max<std::size_t>(1, options_.min_samples_leaf) ||
        nr < std::max<std::size_t>(1, options_.min_samples_leaf)) {
      return true;
    }
    const double wl = std::accumulate(left.begin(), left.end(), 0.0);
    const double wr = std::accumulate(right.begin(), right.end(), 0.0);
    const double score = purity(left, wl) + purity(right, wr);
    if (score > best.score) best = {f, t, score};
    return true;
  }

  const Matrix& x_;
  std::span<const RiskLabel> y_;
  std::span<const double> w_;
  const TreeGrowOptions& options_;
  std::mt19937_64& rng_;
  std::vector<int> features_;
  std::vector<std::size_t> rows_;
  std::vector<std::pair<double, std::size_t>> scratch_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree grow_tree(const Matrix& x, std::span<const RiskLabel> y, std::span<const double> weights,
                       const TreeGrowOptions& options, std::mt19937_64& rng) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    fail(ErrorCode::kLengthMismatch, "feature rows and labels differ");
  }
  if (!weights.empty() && weights.size() != y.size()) {
    fail(ErrorCode::kLengthMismatch, "weights and labels differ");
  }
  if (y.empty()) fail(ErrorCode::kEmpty, "cannot grow a tree on zero rows");
  return DecisionTree(Grower(x, y, weights, options, rng).run());
}

// ---- TreeClassifier ----

TreeClassifier::TreeClassifier(DecisionTree tree, std::size_t n_features)
    : tree_(std::move(tree)), n_features_(n_features) {
  if (tree_.max_feature() >= static_cast<int>(n_features_)) {
    fail(ErrorCode::kInvalidSpec, "tree splits on a feature beyond the schema");
  }
}

Matrix TreeClassifier::predict_proba(const Matrix& features) const {
  check_schema(features);
  Matrix out(features.rows(), kNumClasses);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const auto& dist = tree_.leaf(features.row(i).data()).distribution;
    for (int c = 0; c < kNumClasses; ++c) out(i, c) = dist[c];
  }
  return out;
}

// ---- JSON ----

void to_json(nlohmann::json& j, const DecisionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : tree.nodes()) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.n_samples, n.distribution});
  }
  j = nlohmann::json{{"nodes", std::move(nodes)}};
}

void from_json(const nlohmann::json& j, DecisionTree& tree) {
  std::vector<TreeNode> nodes;
  for (const auto& a : j.at("nodes")) {
    TreeNode n;
    n.feature = a.at(0).get<std::int32_t>();
    n.threshold = a.at(1).get<double>();
    n.left = a.at(2).get<std::int32_t>();
    n.right = a.at(3).get<std::int32_t>();
    n.n_samples = a.at(4).get<std::uint32_t>();
    n.distribution = a.at(5).get<std::array<double, kNumClasses>>();
    nodes.push_back(n);
  }
  tree = DecisionTree(std::move(nodes));
}

}  // namespace fliplab

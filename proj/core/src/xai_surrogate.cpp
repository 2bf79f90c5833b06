#include <cstdio>
#include <random>
#include <string>

#include "fliplab/error.hpp"
#include "fliplab/xai.hpp"

namespace fliplab {

SurrogateTree surrogate_tree(const Classifier& model, const Matrix& x, int max_depth) {
  if (x.rows() == 0) fail(ErrorCode::kEmpty, "surrogate tree needs at least one row");
  if (max_depth < 1) fail(ErrorCode::kInvalidSpec, "surrogate max_depth must be >= 1");

  const LabelVector teacher = model.predict(x);
  TreeGrowOptions options;
  options.max_depth = max_depth;
  std::mt19937_64 rng(0);  // unused: all features are searched and thresholds are exhaustive
  SurrogateTree s;
  s.tree = grow_tree(x, teacher, {}, options, rng);
  s.max_depth = max_depth;

  std::size_t agree = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto& leaf = s.tree.leaf(x.row(i).data());
    const RiskLabel pred = argmax_label(Eigen::Map<const Eigen::RowVectorXd>(leaf.distribution.data(), kNumClasses));
    agree += pred == teacher[static_cast<std::size_t>(i)] ? 1 : 0;
  }
  s.fidelity = static_cast<double>(agree) / static_cast<double>(x.rows());
  s.rules = extract_rules(s.tree);
  return s;
}

std::vector<Rule> extract_rules(const DecisionTree& tree) {
  std::vector<Rule> rules;
  const auto& nodes = tree.nodes();
  if (nodes.empty()) return rules;
  std::vector<Condition> path;
  auto walk = [&](auto&& self, std::size_t i) -> void {
    const TreeNode& n = nodes[i];
    if (n.is_leaf()) {
      const RiskLabel label = argmax_label(Eigen::Map<const Eigen::RowVectorXd>(n.distribution.data(), kNumClasses));
      rules.push_back({path, label, n.n_samples, i});
      return;
    }
    path.push_back({n.feature, true, n.threshold});
    self(self, static_cast<std::size_t>(n.left));
    path.back().less_equal = false;
    self(self, static_cast<std::size_t>(n.right));
    path.pop_back();
  };
  walk(walk, 0);
  return rules;
}

std::string to_string(const Rule& rule, std::span<const std::string> feature_names) {
  std::string out = "IF ";
  if (rule.conditions.empty()) out += "TRUE";
  for (std::size_t k = 0; k < rule.conditions.size(); ++k) {
    const auto& c = rule.conditions[k];
    if (k > 0) out += " AND ";
    const auto f = static_cast<std::size_t>(c.feature);
    out += f < feature_names.size() ? feature_names[f] : "x" + std::to_string(c.feature);
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s %.6g", c.less_equal ? "<=" : ">", c.threshold);
    out += buf;
  }
  out += " THEN ";
  out += name(rule.label);
  out += " (support " + std::to_string(rule.support) + ")";
  return out;
}

}  // namespace fliplab

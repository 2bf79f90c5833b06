#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/classifier.hpp"
#include "fliplab/data.hpp"
#include "fliplab/tree.hpp"

namespace fliplab {

// ---- permutation importance ----

struct ImportanceReport {
  std::string metric = "accuracy";
  double baseline = 0.0;
  int n_repeats = 0;
  bool feasible = true;
  std::string note;
  std::vector<double> importances;  // mean over repeats of baseline - permuted score
  std::vector<double> stddev;       // population sd over repeats
  std::vector<std::vector<double>> per_repeat;  // [feature][repeat]
};

// Column j in repeat r is shuffled with derive_seed(seed, {j, r}), so the result does not depend
// on evaluation order. A model whose baseline predictions are all one class is reported as
// infeasible with zero importances.
ImportanceReport permutation_importance(const Classifier& model, const Matrix& x, const LabelVector& y,
                                        int n_repeats, std::uint64_t seed);

// ---- local explanations ----

enum class LocalMethod : std::uint8_t { kShap, kLime };
std::string_view name(LocalMethod method);

struct LocalExplanation {
  LocalMethod method = LocalMethod::kShap;
  std::vector<double> instance;
  RiskLabel explained_class = RiskLabel::kLow;
  double model_output = 0.0;  // model probability of explained_class at the instance
  double base_value = 0.0;    // SHAP: mean background probability; LIME: surrogate intercept
  std::vector<double> attributions;

  // SHAP diagnostics
  std::vector<double> standard_errors;  // per attribution, over sampled permutations
  double standard_error = 0.0;          // sqrt of the sum of squared per-feature errors
  std::size_t n_evaluations = 0;

  // LIME diagnostics
  double r_squared = 0.0;  // kernel-weighted
  bool ridge_fallback = false;
};

struct ShapOptions {
  int n_permutations = 32;
  // Enumerate all d! orderings instead of sampling (only for d <= 8).
  bool exhaustive = false;
  std::optional<RiskLabel> explained_class;  // default: model argmax at the instance
};

// Permutation-sampling Shapley values of the explained-class probability. Each permutation is
// paired with every background row, walking from the background row to the instance one feature
// at a time. The base value is the mean background probability, so base + sum = model output up
// to rounding.
LocalExplanation shap_values(const Classifier& model, std::span<const double> instance, const Matrix& background,
                             const ShapOptions& options, std::uint64_t seed);

// Exact interventional Shapley values by subset enumeration (d <= 16), for testing.
std::vector<double> exact_shapley(const Classifier& model, std::span<const double> instance,
                                  const Matrix& background, RiskLabel explained_class);

// Rows drawn without replacement (all rows when n >= rows), in ascending row order.
Matrix sample_background(const Matrix& x, std::size_t n, std::uint64_t seed);

struct LimeOptions {
  int n_samples = 1000;
  double kernel_width = 3.75;  // 0.75 * sqrt(25)
  std::optional<RiskLabel> explained_class;
};

// Perturbations are x + sigma * z with z ~ N(0, I), where sigma comes from the training scaler;
// the surrogate is fitted on z, so attributions are per standard deviation.
LocalExplanation lime_explain(const Classifier& model, std::span<const double> instance,
                              const ScalerParams& train_stats, const LimeOptions& options, std::uint64_t seed);

// ---- surrogate trees ----

struct Condition {
  int feature;
  bool less_equal;  // x[feature] <= threshold, otherwise x[feature] > threshold
  double threshold;
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Rule {
  std::vector<Condition> conditions;  // empty for a single-leaf tree
  RiskLabel label;
  std::uint32_t support;
  std::size_t leaf;  // node index in the tree
};

struct SurrogateTree {
  DecisionTree tree;
  int max_depth = 0;
  double fidelity = 0.0;  // agreement with the teacher on the fitting set
  std::vector<Rule> rules;
};

// CART (Gini) tree fitted to the teacher's predicted labels on x.
SurrogateTree surrogate_tree(const Classifier& model, const Matrix& x, int max_depth);

// One rule per leaf, leaves in tree order.
std::vector<Rule> extract_rules(const DecisionTree& tree);
std::string to_string(const Rule& rule, std::span<const std::string> feature_names);

// ---- serialization ----

// Base value, output value and signed per-feature contributions for force-style charts.
nlohmann::json force_plot_json(const LocalExplanation& e, std::span<const std::string> feature_names);

void to_json(nlohmann::json& j, const ImportanceReport& r);
void from_json(const nlohmann::json& j, ImportanceReport& r);
void to_json(nlohmann::json& j, const LocalExplanation& e);
void from_json(const nlohmann::json& j, LocalExplanation& e);
void to_json(nlohmann::json& j, const SurrogateTree& s);
void from_json(const nlohmann::json& j, SurrogateTree& s);

}  // namespace fliplab

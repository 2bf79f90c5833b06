#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"
#include "fliplab/xai.hpp"

namespace fliplab {

nlohmann::json force_plot_json(const LocalExplanation& e, std::span<const std::string> feature_names) {
  nlohmann::json contributions = nlohmann::json::array();
  for (std::size_t j = 0; j < e.attributions.size(); ++j) {
    contributions.push_back({{"feature", j < feature_names.size() ? feature_names[j] : "x" + std::to_string(j)},
                             {"value", j < e.instance.size() ? e.instance[j] : 0.0},
                             {"contribution", e.attributions[j]}});
  }
  return {{"method", name(e.method)},
          {"class", name(e.explained_class)},
          {"base_value", e.base_value},
          {"output_value", e.model_output},
          {"contributions", std::move(contributions)}};
}

void to_json(nlohmann::json& j, const ImportanceReport& r) {
  j = nlohmann::json{{"metric", r.metric},         {"baseline", r.baseline}, {"n_repeats", r.n_repeats},
                     {"feasible", r.feasible},     {"note", r.note},         {"importances", r.importances},
                     {"stddev", r.stddev},         {"per_repeat", r.per_repeat}};
}

void from_json(const nlohmann::json& j, ImportanceReport& r) {
  r.metric = j.at("metric").get<std::string>();
  r.baseline = j.at("baseline").get<double>();
  r.n_repeats = j.at("n_repeats").get<int>();
  r.feasible = j.at("feasible").get<bool>();
  r.note = j.value("note", std::string());
  r.importances = j.at("importances").get<std::vector<double>>();
  r.stddev = j.at("stddev").get<std::vector<double>>();
  r.per_repeat = j.value("per_repeat", std::vector<std::vector<double>>{});
}

void to_json(nlohmann::json& j, const LocalExplanation& e) {
  j = nlohmann::json{{"method", name(e.method)},
                     {"instance", e.instance},
                     {"class", name(e.explained_class)},
                     {"model_output", e.model_output},
                     {"base_value", e.base_value},
                     {"attributions", e.attributions}};
  if (e.method == LocalMethod::kShap) {
    j["standard_errors"] = e.standard_errors;
    j["standard_error"] = e.standard_error;
    j["n_evaluations"] = e.n_evaluations;
  } else {
    j["r_squared"] = e.r_squared;
    j["ridge_fallback"] = e.ridge_fallback;
  }
}

void from_json(const nlohmann::json& j, LocalExplanation& e) {
  const auto method = j.at("method").get<std::string>();
  if (method != "SHAP" && method != "LIME") fail(ErrorCode::kParse, "unknown explanation method " + method);
  e.method = method == "SHAP" ? LocalMethod::kShap : LocalMethod::kLime;
  e.instance = j.at("instance").get<std::vector<double>>();
  const auto label = parse_label(j.at("class").get<std::string>());
  if (!label) fail(ErrorCode::kUnknownLabel, "unknown explained class");
  e.explained_class = *label;
  e.model_output = j.at("model_output").get<double>();
  e.base_value = j.at("base_value").get<double>();
  e.attributions = j.at("attributions").get<std::vector<double>>();
  e.standard_errors = j.value("standard_errors", std::vector<double>{});
  e.standard_error = j.value("standard_error", 0.0);
  e.n_evaluations = j.value("n_evaluations", std::size_t{0});
  e.r_squared = j.value("r_squared", 0.0);
  e.ridge_fallback = j.value("ridge_fallback", false);
}

void to_json(nlohmann::json& j, const SurrogateTree& s) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : s.rules) {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : r.conditions) conds.push_back({c.feature, c.less_equal ? "<=" : ">", c.threshold});
    rules.push_back({{"conditions", std::move(conds)}, {"label", name(r.label)}, {"support", r.support}, {"leaf", r.leaf}});
  }
  j = nlohmann::json{{"max_depth", s.max_depth}, {"fidelity", s.fidelity}, {"tree", s.tree}, {"rules", std::move(rules)}};
}

void from_json(const nlohmann::json& j, SurrogateTree& s) {
  s.max_depth = j.at("max_depth").get<int>();
  s.fidelity = j.at("fidelity").get<double>();
  s.tree = j.at("tree").get<DecisionTree>();
  s.rules = extract_rules(s.tree);
}

}  // namespace fliplab

#include "fliplab/poison.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view name(FlipScenario scenario) {
  return scenario == FlipScenario::kS1ToHigh ? "S1_TO_HIGH" : "S2_ROTATE";
}

std::optional<FlipScenario> parse_scenario(std::string_view text) {
  const std::string s = upper(text);
  if (s == "S1_TO_HIGH" || s == "S1" || s == "1") return FlipScenario::kS1ToHigh;
  if (s == "S2_ROTATE" || s == "S2" || s == "2") return FlipScenario::kS2Rotate;
  return std::nullopt;
}

std::string_view name(SelectionPool pool) {
  return pool == SelectionPool::kChangingRows ? "CHANGING_ROWS" : "ALL_ROWS";
}

std::optional<SelectionPool> parse_pool(std::string_view text) {
  const std::string s = upper(text);
  if (s == "CHANGING_ROWS" || s == "CHANGING") return SelectionPool::kChangingRows;
  if (s == "ALL_ROWS" || s == "ALL") return SelectionPool::kAllRows;
  return std::nullopt;
}

RiskLabel flip_label(RiskLabel label, FlipScenario scenario) {
  if (scenario == FlipScenario::kS1ToHigh) return RiskLabel::kHigh;
  return static_cast<RiskLabel>((code(label) + 1) % kNumClasses);
}

std::size_t PoisonPlan::effective_flips() const {
  return static_cast<std::size_t>(
      std::count_if(flips.begin(), flips.end(), [](const Flip& f) { return !f.no_op(); }));
}

PoisonPlan plan_flips(const LabelVector& labels, FlipScenario scenario, double rate,
                      std::uint64_t seed, SelectionPool pool) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    fail(ErrorCode::kInvalidRate, "poisoning rate must lie in [0, 1], got " + std::to_string(rate));
  }
  PoisonPlan plan;
  plan.scenario = scenario;
  plan.rate = rate;
  plan.seed = seed;
  plan.pool = pool;
  plan.n_rows = labels.size();
  plan.requested =
      static_cast<std::size_t>(std::floor(rate * static_cast<double>(labels.size()) + 0.5 + 1e-9));

  std::vector<std::size_t> candidates;
  candidates.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (pool == SelectionPool::kAllRows || flip_label(labels[i], scenario) != labels[i]) {
      candidates.push_back(i);
    }
  }
  const std::size_t take = std::min(plan.requested, candidates.size());
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `take` slots are a uniform random subset.
  for (std::size_t k = 0; k < take; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, candidates.size() - 1);
    std::swap(candidates[k], candidates[pick(rng)]);
  }
  candidates.resize(take);
  std::sort(candidates.begin(), candidates.end());

  plan.flips.reserve(take);
  for (std::size_t row : candidates) {
    plan.flips.push_back({row, labels[row], flip_label(labels[row], scenario)});
  }
  return plan;
}

Dataset apply(const Dataset& train, const PoisonPlan& plan) {
  LabelVector labels = train.labels();
  for (const Flip& f : plan.flips) {
    if (f.row >= labels.size()) {
      fail(ErrorCode::kIndexOutOfRange, "plan row " + std::to_string(f.row) + " >= " +
                                            std::to_string(labels.size()));
    }
    if (labels[f.row] != f.from) {
      fail(ErrorCode::kPlanMismatch, "row " + std::to_string(f.row) + " has label " +
                                         std::string(name(labels[f.row])) + ", plan expects " +
                                         std::string(name(f.from)));
    }
    labels[f.row] = f.to;
  }
  return train.with_labels(std::move(labels));
}

void to_json(nlohmann::json& j, const PoisonPlan& plan) {
  nlohmann::json flips = nlohmann::json::array();
  for (const Flip& f : plan.flips) {
    flips.push_back({{"row", f.row}, {"from", name(f.from)}, {"to", name(f.to)}, {"no_op", f.no_op()}});
  }
  j = nlohmann::json{{"scenario", name(plan.scenario)},
                     {"rate", plan.rate},
                     {"seed", plan.seed},
                     {"pool", name(plan.pool)},
                     {"n_rows", plan.n_rows},
                     {"requested", plan.requested},
                     {"effective", plan.effective_flips()},
                     {"flips", std::move(flips)}};
}

void from_json(const nlohmann::json& j, PoisonPlan& plan) {
  const auto scenario = parse_scenario(j.at("scenario").get<std::string>());
  if (!scenario) fail(ErrorCode::kParse, "unknown scenario in plan");
  plan.scenario = *scenario;
  plan.rate = j.at("rate").get<double>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  const auto pool = parse_pool(j.value("pool", std::string("CHANGING_ROWS")));
  if (!pool) fail(ErrorCode::kParse, "unknown selection pool in plan");
  plan.pool = *pool;
  plan.n_rows = j.at("n_rows").get<std::size_t>();
  plan.requested = j.at("requested").get<std::size_t>();
  plan.flips.clear();
  for (const auto& f : j.at("flips")) {
    const auto from = parse_label(f.at("from").get<std::string>());
    const auto to = parse_label(f.at("to").get<std::string>());
    if (!from || !to) fail(ErrorCode::kParse, "unknown label in plan flip");
    plan.flips.push_back({f.at("row").get<std::size_t>(), *from, *to});
  }
}

}  // namespace fliplab

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/data.hpp"

namespace fliplab {

enum class FlipScenario : std::uint8_t {
  kS1ToHigh,  // every label becomes HIGH
  kS2Rotate,  // LOW -> NORMAL -> MEDIUM -> HIGH -> LOW
};

inline constexpr std::array<FlipScenario, 2> kAllScenarios = {FlipScenario::kS1ToHigh,
                                                              FlipScenario::kS2Rotate};

std::string_view name(FlipScenario scenario);  // "S1_TO_HIGH", "S2_ROTATE"
std::optional<FlipScenario> parse_scenario(std::string_view text);

RiskLabel flip_label(RiskLabel label, FlipScenario scenario);

// Which training rows the attacker draws from.
enum class SelectionPool : std::uint8_t {
  kChangingRows,  // only rows whose label the scenario changes (S1 skips HIGH rows)
  kAllRows,       // every row; S1 picks on HIGH rows are recorded as no-ops
};

std::string_view name(SelectionPool pool);
std::optional<SelectionPool> parse_pool(std::string_view text);

struct Flip {
  std::size_t row;
  RiskLabel from;
  RiskLabel to;

  bool no_op() const { return from == to; }
  friend bool operator==(const Flip&, const Flip&) = default;
};

struct PoisonPlan {
  FlipScenario scenario = FlipScenario::kS1ToHigh;
  double rate = 0.0;
  std::uint64_t seed = 0;
  SelectionPool pool = SelectionPool::kChangingRows;
  std::size_t n_rows = 0;      // training rows the plan was drawn for
  std::size_t requested = 0;   // round-half-up(rate * n_rows)
  std::vector<Flip> flips;     // ascending by row

  std::size_t effective_flips() const;
  friend bool operator==(const PoisonPlan&, const PoisonPlan&) = default;
};

// Selects round-half-up(rate * n) distinct rows uniformly from the pool (capped at the pool size).
PoisonPlan plan_flips(const LabelVector& labels, FlipScenario scenario, double rate,
                      std::uint64_t seed, SelectionPool pool = SelectionPool::kChangingRows);

// Replaces labels at the plan's rows; features and timestamps are carried over unchanged.
Dataset apply(const Dataset& train, const PoisonPlan& plan);

void to_json(nlohmann::json& j, const PoisonPlan& plan);
void from_json(const nlohmann::json& j, PoisonPlan& plan);

}  // namespace fliplab

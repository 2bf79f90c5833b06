#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fliplab/data.hpp"
#include "fliplab/metrics.hpp"
#include "fliplab/model.hpp"
#include "fliplab/poison.hpp"
#include "fliplab/xai.hpp"

namespace fliplab {

std::string_view version();

struct CsvSource {
  std::filesystem::path path;
};
using DataSource = std::variant<SynthSpec, CsvSource>;

struct ExplainConfig {
  bool importance = false;
  bool shap = false;
  bool lime = false;
  bool surrogate = false;
  int importance_repeats = 5;
  int shap_permutations = 16;
  std::size_t background_size = 100;
  int lime_samples = 1000;
  double lime_kernel_width = 3.75;
  int surrogate_depth = 4;

  bool any() const { return importance || shap || lime || surrogate; }
};

struct SweepConfig {
  DataSource data = SynthSpec{};
  double train_fraction = 0.8;
  bool stratified = true;
  // Draw a fresh split for every cell instead of sharing one split across the sweep.
  bool resplit_per_cell = false;
  std::uint64_t master_seed = 7;
  std::vector<ModelFamily> roster{kAllFamilies.begin(), kAllFamilies.end()};
  std::map<ModelFamily, nlohmann::json> overrides;
  std::vector<FlipScenario> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
  std::vector<double> rates = {0.0, 0.05, 0.25, 0.50, 0.75};
  SelectionPool pool = SelectionPool::kChangingRows;
  ExplainConfig explain;
  std::filesystem::path out_dir = "fliplab-out";

  // Throws Error(kInvalidConfig).
  void validate() const;
  ModelSpec model_spec(ModelFamily family) const;
};

void to_json(nlohmann::json& j, const SweepConfig& c);
void from_json(const nlohmann::json& j, SweepConfig& c);
SweepConfig load_config(const std::filesystem::path& path);

// Seed material for one cell.
std::uint64_t cell_seed(std::uint64_t master, ModelFamily family, FlipScenario scenario, double rate);
std::uint64_t model_seed(std::uint64_t master, ModelFamily family);
std::uint64_t data_seed(std::uint64_t master);
std::uint64_t split_seed(std::uint64_t master);

// Data shared by every cell of a sweep: the full dataset, the split and the train-fitted scaler.
struct Prepared {
  Dataset data;
  Split split;
  ScalerParams scaler;
};

Prepared prepare(const SweepConfig& config);

struct PlanSummary {
  SelectionPool pool = SelectionPool::kChangingRows;
  std::size_t n_rows = 0;
  std::size_t requested = 0;
  std::size_t effective = 0;
  std::size_t no_ops = 0;
};

struct CellExplanations {
  std::vector<std::size_t> instance_rows;  // test-split rows that were explained
  std::optional<ImportanceReport> importance;
  std::vector<LocalExplanation> shap;
  std::vector<LocalExplanation> lime;
  std::optional<SurrogateTree> surrogate;
};

struct CellResult {
  ModelFamily family = ModelFamily::kRandomForest;
  FlipScenario scenario = FlipScenario::kS1ToHigh;
  double rate = 0.0;
  std::uint64_t seed = 0;        // plan seed of this key
  std::uint64_t model_seed = 0;  // shared across the family's cells
  PlanSummary plan;
  std::optional<MetricsReport> metrics;  // empty when the cell failed
  std::optional<std::string> error;
  std::optional<CellExplanations> explanations;
  double duration_ms = 0.0;  // not serialized into cells.jsonl

  bool ok() const { return !error.has_value(); }
};

struct ResultSet {
  SweepConfig config;
  std::vector<CellResult> cells;  // canonical order
  std::string version;
  std::string created;  // ISO-8601 UTC, set by sweep()

  const CellResult* find(ModelFamily family, FlipScenario scenario, double rate) const;
  std::size_t failures() const;
};

// The explained test rows: first misclassified and first correctly classified, when present.
std::vector<std::size_t> choose_instances(const LabelVector& truth, const LabelVector& predicted);

// Evaluates one grid cell. Errors from the modules are rethrown with the cell key in the message.
CellResult run_cell(const SweepConfig& config, const Prepared& prepared, ModelFamily family,
                    FlipScenario scenario, double rate);
CellResult run_cell(const SweepConfig& config, ModelFamily family, FlipScenario scenario, double rate);

// Trains the model for one cell (poisoned train split, standardized features) with the scaler attached.
TrainedModel train_cell_model(const SweepConfig& config, const Prepared& prepared, ModelFamily family,
                              FlipScenario scenario, double rate, PoisonPlan* plan_out = nullptr);

// Runs every cell on up to `jobs` threads. Rate 0 is computed once per family and stored under each
// scenario key. Failed cells carry an error and the sweep continues.
ResultSet sweep(const SweepConfig& config, int jobs = 1);

void to_json(nlohmann::json& j, const CellResult& c);
void from_json(const nlohmann::json& j, CellResult& c);

// Writes cells.jsonl and config.json (deterministic) plus run_info.json (timestamp, durations).
void write_results(const std::filesystem::path& dir, const ResultSet& results);
ResultSet read_results(const std::filesystem::path& dir);

// ---- reports and charts ----

// Table rows for one scenario: model, rate, accuracy, recall, precision, f1, log_loss, log_loss_value.
std::string render_table_csv(const ResultSet& results, FlipScenario scenario);
// Per family at the given rate: S1 and S2 log loss and whether S1 >= S2.
std::string render_contrast_csv(const ResultSet& results, double rate = 0.5);
// Returns the paths written.
std::vector<std::filesystem::path> render_report(const ResultSet& results, const std::filesystem::path& dir);

std::string accuracy_chart_svg(const ResultSet& results, FlipScenario scenario);
std::string confusion_svg(const CellResult& cell);
std::string importance_svg(const ImportanceReport& report, const std::string& title);
std::string force_svg(const LocalExplanation& explanation, const std::string& title);
std::vector<std::filesystem::path> render_charts(const ResultSet& results, const std::filesystem::path& dir);

// Stable file stem for a cell, e.g. "GBT_S1_TO_HIGH_r075".
std::string cell_stem(const CellResult& cell);

}  // namespace fliplab

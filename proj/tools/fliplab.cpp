// fliplab command line: synthetic data, label-flipping attacks, training, sweeps and reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"
#include "fliplab/harness.hpp"
#include "fliplab/log.hpp"
#include "fliplab/seed.hpp"

namespace {

using namespace fliplab;

constexpr int kExitCellFailure = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int jobs = 1;
};

SweepConfig base_config(const Common& common) {
  SweepConfig c;
  if (!common.config_path.empty()) c = load_config(common.config_path);
  if (common.seed) c.master_seed = *common.seed;
  if (!common.out_dir.empty()) c.out_dir = common.out_dir;
  c.validate();
  return c;
}

std::filesystem::path out_path(const Common& common, const std::string& explicit_path, const std::string& file) {
  if (!explicit_path.empty()) return explicit_path;
  const std::filesystem::path dir = common.out_dir.empty() ? "." : common.out_dir;
  std::filesystem::create_directories(dir);
  return dir / file;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

FlipScenario scenario_arg(const std::string& s) {
  const auto v = parse_scenario(s);
  if (!v) fail(ErrorCode::kInvalidConfig, "unknown scenario '" + s + "'");
  return *v;
}

ModelFamily family_arg(const std::string& s) {
  const auto v = parse_family(s);
  if (!v) fail(ErrorCode::kInvalidConfig, "unknown model family '" + s + "'");
  return *v;
}

Matrix take_rows(const Matrix& x, std::size_t row) {
  if (row >= static_cast<std::size_t>(x.rows())) {
    fail(ErrorCode::kIndexOutOfRange, "row " + std::to_string(row) + " is past the end of the data");
  }
  return x.row(static_cast<Eigen::Index>(row));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fliplab: label-flipping poisoning experiments on EEG band-power classifiers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(version()));

  Common common;
  app.add_option("--config", common.config_path, "Sweep configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", common.seed, "Master seed (overrides the config)");
  app.add_option("--out-dir", common.out_dir, "Output directory");
  app.add_option("--jobs", common.jobs, "Worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic band-power CSV");
  std::string synth_out;
  std::optional<std::size_t> synth_n;
  std::optional<double> synth_sep;
  std::optional<double> synth_noise;
  synth->add_option("-o,--output", synth_out, "CSV path (default <out-dir>/synthetic.csv)");
  synth->add_option("-n,--samples", synth_n, "Number of rows");
  synth->add_option("--separation", synth_sep, "Class separation in log-power space");
  synth->add_option("--noise-scale", synth_noise, "Log-space noise standard deviation");

  // attack
  auto* attack = app.add_subcommand("attack", "Poison the labels of a CSV");
  std::string attack_in;
  std::string attack_scenario = "S1_TO_HIGH";
  double attack_rate = 0.0;
  std::string attack_pool;
  std::string attack_csv;
  std::string attack_plan;
  attack->add_option("-i,--input", attack_in, "Training CSV")->required()->check(CLI::ExistingFile);
  attack->add_option("--scenario", attack_scenario, "S1_TO_HIGH or S2_ROTATE");
  attack->add_option("--rate", attack_rate, "Poisoning rate in [0, 1]")->required();
  attack->add_option("--pool", attack_pool, "CHANGING_ROWS or ALL_ROWS (default from config)");
  attack->add_option("--output", attack_csv, "Poisoned CSV (default <out-dir>/poisoned.csv)");
  attack->add_option("--plan", attack_plan, "Plan JSON (default <out-dir>/plan.json)");

  // train
  auto* train = app.add_subcommand("train", "Fit one model on a CSV");
  std::string train_in;
  std::string train_family = "RANDOM_FOREST";
  std::string train_params;
  std::string train_out;
  bool train_raw = false;
  train->add_option("-i,--input", train_in, "Training CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--family", train_family, "RANDOM_FOREST, EXTRA_TREES, ADABOOST, GBT, MLP or KNN");
  train->add_option("--params", train_params, "Hyperparameter overrides as a JSON object");
  train->add_option("-o,--output", train_out, "Model JSON (default <out-dir>/model.json)");
  train->add_flag("--no-standardize", train_raw, "Train on raw band powers without a scaler");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a saved model on a labelled CSV");
  std::string eval_model;
  std::string eval_in;
  std::string eval_out;
  evaluate_cmd->add_option("-m,--model", eval_model, "Model JSON")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("-i,--input", eval_in, "Labelled CSV")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("-o,--output", eval_out, "Metrics JSON (default: stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the model x scenario x rate grid");
  bool sweep_no_report = false;
  sweep_cmd->add_flag("--no-report", sweep_no_report, "Skip tables and charts");

  // explain
  auto* explain = app.add_subcommand("explain", "Explain a saved model");
  std::string ex_model;
  std::string ex_in;
  std::size_t ex_row = 0;
  std::string ex_method = "all";
  std::string ex_out;
  int ex_perms = 16;
  int ex_repeats = 5;
  int ex_depth = 4;
  explain->add_option("-m,--model", ex_model, "Model JSON")->required()->check(CLI::ExistingFile);
  explain->add_option("-i,--input", ex_in, "Reference CSV (background, importance and surrogate data)")
      ->required()
      ->check(CLI::ExistingFile);
  explain->add_option("--row", ex_row, "Row of the reference CSV to explain locally");
  explain->add_option("--method", ex_method, "shap, lime, importance, surrogate or all")
      ->check(CLI::IsMember({"shap", "lime", "importance", "surrogate", "all"}));
  explain->add_option("--permutations", ex_perms, "SHAP permutations")->check(CLI::PositiveNumber);
  explain->add_option("--repeats", ex_repeats, "Permutation-importance repeats")->check(CLI::PositiveNumber);
  explain->add_option("--depth", ex_depth, "Surrogate tree depth")->check(CLI::PositiveNumber);
  explain->add_option("-o,--output", ex_out, "Explanation JSON (default <out-dir>/explanation.json)");

  // report
  auto* report = app.add_subcommand("report", "Render tables and charts from sweep results");
  std::string report_in;
  report->add_option("-r,--results", report_in, "Directory holding cells.jsonl and config.json")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    configure_logging_from_env("info");
    const SweepConfig config = base_config(common);

    if (synth->parsed()) {
      SynthSpec spec = std::holds_alternative<SynthSpec>(config.data) ? std::get<SynthSpec>(config.data) : SynthSpec{};
      if (synth_n) spec.n_samples = *synth_n;
      if (synth_sep) spec.separation = *synth_sep;
      if (synth_noise) spec.noise_scale = *synth_noise;
      try {
        spec.validate();
      } catch (const Error& e) {
        fail(ErrorCode::kInvalidConfig, e.what());
      }
      const auto path = out_path(common, synth_out, "synthetic.csv");
      save_csv(path, synthesize(spec, data_seed(config.master_seed)));
      std::printf("%s\n", path.string().c_str());
    } else if (attack->parsed()) {
      const Dataset data = load_csv(attack_in);
      SelectionPool pool = config.pool;
      if (!attack_pool.empty()) {
        const auto p = parse_pool(attack_pool);
        if (!p) fail(ErrorCode::kInvalidConfig, "unknown selection pool '" + attack_pool + "'");
        pool = *p;
      }
      const FlipScenario scenario = scenario_arg(attack_scenario);
      const PoisonPlan plan = plan_flips(data.labels(), scenario, attack_rate,
                                         derive_seed(config.master_seed, "attack"), pool);
      const auto csv = out_path(common, attack_csv, "poisoned.csv");
      const auto plan_file = out_path(common, attack_plan, "plan.json");
      save_csv(csv, apply(data, plan));
      write_json(plan_file, plan);
      std::printf("%zu of %zu rows relabelled (%zu selected)\n", plan.effective_flips(), plan.n_rows, plan.flips.size());
    } else if (train->parsed()) {
      const Dataset data = load_csv(train_in);
      const ModelFamily family = family_arg(train_family);
      ModelSpec spec = config.model_spec(family);
      if (!train_params.empty()) {
        nlohmann::json overrides;
        try {
          overrides = nlohmann::json::parse(train_params);
        } catch (const nlohmann::json::exception& e) {
          fail(ErrorCode::kInvalidConfig, std::string("--params is not valid JSON: ") + e.what());
        }
        try {
          spec = spec.with_overrides(overrides);
        } catch (const Error& e) {
          fail(ErrorCode::kInvalidConfig, e.what());
        }
      }
      TrainedModel model = [&] {
        if (train_raw) return fit(spec, data);
        const ScalerParams scaler = ScalerParams::fit(data.features());
        return fit(spec, scaler.transform(data.features()), data.labels()).with_scaler(scaler);
      }();
      const auto path = out_path(common, train_out, "model.json");
      save_model(path, model);
      std::printf("%s\n", path.string().c_str());
    } else if (evaluate_cmd->parsed()) {
      const TrainedModel model = load_model(eval_model);
      const Dataset data = load_csv(eval_in);
      const nlohmann::json j = evaluate(data.labels(), model.predict_proba(data.features()));
      if (eval_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        write_json(eval_out, j);
      }
    } else if (sweep_cmd->parsed()) {
      const ResultSet rs = sweep(config, common.jobs);
      write_results(config.out_dir, rs);
      if (!sweep_no_report) {
        render_report(rs, config.out_dir);
        render_charts(rs, config.out_dir / "charts");
      }
      std::printf("%zu cells, %zu failed, results in %s\n", rs.cells.size(), rs.failures(), config.out_dir.string().c_str());
      if (rs.failures() > 0) return kExitCellFailure;
    } else if (explain->parsed()) {
      const TrainedModel model = load_model(ex_model);
      const Dataset data = load_csv(ex_in);
      const Matrix& x = data.features();
      const Matrix instance = take_rows(x, ex_row);
      const std::span<const double> inst(instance.data(), static_cast<std::size_t>(instance.cols()));
      const bool all = ex_method == "all";
      const std::uint64_t s = derive_seed(config.master_seed, "explain");
      const std::vector<std::string> names(feature_names().begin(), feature_names().end());
      nlohmann::json out{{"row", ex_row}};
      if (all || ex_method == "shap") {
        ShapOptions so;
        so.n_permutations = ex_perms;
        const Matrix bg = sample_background(x, config.explain.background_size, derive_seed(s, "background"));
        const LocalExplanation e = shap_values(model, inst, bg, so, derive_seed(s, "shap"));
        out["shap"] = e;
        out["force_plot"] = force_plot_json(e, names);
      }
      if (all || ex_method == "lime") {
        LimeOptions lo;
        lo.n_samples = config.explain.lime_samples;
        lo.kernel_width = config.explain.lime_kernel_width;
        const ScalerParams stats = model.scaler() ? *model.scaler() : ScalerParams::fit(x);
        out["lime"] = lime_explain(model, inst, stats, lo, derive_seed(s, "lime"));
      }
      if (all || ex_method == "importance") {
        out["importance"] = permutation_importance(model, x, data.labels(), ex_repeats, derive_seed(s, "importance"));
      }
      if (all || ex_method == "surrogate") {
        const SurrogateTree tree = surrogate_tree(model, x, ex_depth);
        out["surrogate"] = tree;
        std::vector<std::string> rules;
        for (const auto& r : tree.rules) rules.push_back(to_string(r, names));
        out["rules"] = rules;
      }
      const auto path = out_path(common, ex_out, "explanation.json");
      write_json(path, out);
      std::printf("%s\n", path.string().c_str());
    } else if (report->parsed()) {
      const ResultSet rs = read_results(report_in);
      const std::filesystem::path dir = common.out_dir.empty() ? report_in : common.out_dir;
      const auto tables = render_report(rs, dir);
      const auto charts = render_charts(rs, dir / "charts");
      std::printf("%zu report files, %zu charts in %s\n", tables.size(), charts.size(), dir.string().c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "fliplab: %s\n", e.what());
    switch (e.code()) {
      case ErrorCode::kInvalidConfig:
      case ErrorCode::kInvalidSpec:
      case ErrorCode::kInvalidRate: return kExitConfig;
      default: return kExitCellFailure;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fliplab: %s\n", e.what());
    return kExitCellFailure;
  }
  return 0;
}

#include "fliplab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "fliplab/error.hpp"
#include "fliplab/seed.hpp"

namespace fliplab {

std::string_view version() { return FLIPLAB_VERSION; }

// ---- config ----

void SweepConfig::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::kInvalidConfig, msg); };
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) bad("train_fraction must lie in (0, 1)");
  if (roster.empty()) bad("model roster is empty");
  if (std::set<ModelFamily>(roster.begin(), roster.end()).size() != roster.size()) bad("roster has duplicates");
  if (scenarios.empty()) bad("no scenarios selected");
  if (std::set<FlipScenario>(scenarios.begin(), scenarios.end()).size() != scenarios.size()) {
    bad("scenarios have duplicates");
  }
  if (rates.empty()) bad("no poisoning rates given");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0 && rates[i] <= 1.0)) bad("rate " + std::to_string(rates[i]) + " is outside [0, 1]");
    if (i > 0 && !(rates[i] > rates[i - 1])) bad("rates must be sorted and unique");
  }
  if (const auto* synth = std::get_if<SynthSpec>(&data)) {
    try {
      synth->validate();
    } catch (const Error& e) {
      bad(std::string("synthetic data: ") + e.what());
    }
  } else if (std::get<CsvSource>(data).path.empty()) {
    bad("csv data source needs a path");
  }
  if (explain.importance_repeats < 1) bad("importance_repeats must be >= 1");
  if (explain.shap_permutations < 1) bad("shap_permutations must be >= 1");
  if (explain.background_size < 1) bad("background_size must be >= 1");
  if (explain.lime_samples < 50) bad("lime_samples must be >= 50");
  if (!(explain.lime_kernel_width > 0.0)) bad("lime_kernel_width must be > 0");
  if (explain.surrogate_depth < 1) bad("surrogate_depth must be >= 1");
  for (ModelFamily f : roster) {
    try {
      (void)model_spec(f);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
}

ModelSpec SweepConfig::model_spec(ModelFamily family) const {
  ModelSpec spec = ModelSpec::defaults(family, model_seed(master_seed, family));
  if (auto it = overrides.find(family); it != overrides.end()) spec = spec.with_overrides(it->second);
  return spec;
}

namespace {

nlohmann::json source_json(const DataSource& data) {
  if (const auto* s = std::get_if<SynthSpec>(&data)) {
    return {{"type", "synth"},
            {"n_samples", s->n_samples},
            {"class_prevalences", s->class_prevalences},
            {"separation", s->separation},
            {"noise_scale", s->noise_scale}};
  }
  return {{"type", "csv"}, {"path", std::get<CsvSource>(data).path.string()}};
}

DataSource source_from_json(const nlohmann::json& j) {
  const std::string type = j.value("type", std::string("synth"));
  if (type == "csv") return CsvSource{j.at("path").get<std::string>()};
  if (type != "synth") fail(ErrorCode::kInvalidConfig, "data.type must be 'synth' or 'csv'");
  SynthSpec s;
  s.n_samples = j.value("n_samples", s.n_samples);
  s.class_prevalences = j.value("class_prevalences", s.class_prevalences);
  s.separation = j.value("separation", s.separation);
  s.noise_scale = j.value("noise_scale", s.noise_scale);
  return s;
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::kInvalidConfig, where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      fail(ErrorCode::kInvalidConfig, "unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

void to_json(nlohmann::json& j, const SweepConfig& c) {
  std::vector<std::string> roster;
  for (ModelFamily f : c.roster) roster.emplace_back(name(f));
  std::vector<std::string> scenarios;
  for (FlipScenario s : c.scenarios) scenarios.emplace_back(name(s));
  nlohmann::json overrides = nlohmann::json::object();
  for (const auto& [f, o] : c.overrides) overrides[std::string(name(f))] = o;
  const auto& e = c.explain;
  j = nlohmann::json{{"data", source_json(c.data)},
                     {"train_fraction", c.train_fraction},
                     {"stratified", c.stratified},
                     {"resplit_per_cell", c.resplit_per_cell},
                     {"master_seed", c.master_seed},
                     {"roster", roster},
                     {"overrides", overrides},
                     {"scenarios", scenarios},
                     {"rates", c.rates},
                     {"pool", name(c.pool)},
                     {"explain",
                      {{"importance", e.importance},
                       {"shap", e.shap},
                       {"lime", e.lime},
                       {"surrogate", e.surrogate},
                       {"importance_repeats", e.importance_repeats},
                       {"shap_permutations", e.shap_permutations},
                       {"background_size", e.background_size},
                       {"lime_samples", e.lime_samples},
                       {"lime_kernel_width", e.lime_kernel_width},
                       {"surrogate_depth", e.surrogate_depth}}},
                     {"out_dir", c.out_dir.string()}};
}

void from_json(const nlohmann::json& j, SweepConfig& c) {
  try {
    check_keys(j,
               {"data", "train_fraction", "stratified", "resplit_per_cell", "master_seed", "roster", "overrides",
                "scenarios", "rates", "pool", "explain", "out_dir"},
               "config");
    c = SweepConfig{};
    if (j.contains("data")) {
      check_keys(j.at("data"), {"type", "path", "n_samples", "class_prevalences", "separation", "noise_scale"},
                 "data");
      c.data = source_from_json(j.at("data"));
    }
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.stratified = j.value("stratified", c.stratified);
    c.resplit_per_cell = j.value("resplit_per_cell", c.resplit_per_cell);
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("roster")) {
      c.roster.clear();
      for (const auto& s : j.at("roster")) {
        const auto f = parse_family(s.get<std::string>());
        if (!f) fail(ErrorCode::kInvalidConfig, "unknown model family '" + s.get<std::string>() + "'");
        c.roster.push_back(*f);
      }
    }
    if (j.contains("overrides")) {
      for (const auto& [key, value] : j.at("overrides").items()) {
        const auto f = parse_family(key);
        if (!f) fail(ErrorCode::kInvalidConfig, "unknown model family '" + key + "' in overrides");
        c.overrides[*f] = value;
      }
    }
    if (j.contains("scenarios")) {
      c.scenarios.clear();
      for (const auto& s : j.at("scenarios")) {
        const auto sc = parse_scenario(s.get<std::string>());
        if (!sc) fail(ErrorCode::kInvalidConfig, "unknown scenario '" + s.get<std::string>() + "'");
        c.scenarios.push_back(*sc);
      }
    }
    if (j.contains("rates")) c.rates = j.at("rates").get<std::vector<double>>();
    if (j.contains("pool")) {
      const auto p = parse_pool(j.at("pool").get<std::string>());
      if (!p) fail(ErrorCode::kInvalidConfig, "unknown selection pool '" + j.at("pool").get<std::string>() + "'");
      c.pool = *p;
    }
    if (j.contains("explain")) {
      const auto& e = j.at("explain");
      check_keys(e,
                 {"importance", "shap", "lime", "surrogate", "importance_repeats", "shap_permutations",
                  "background_size", "lime_samples", "lime_kernel_width", "surrogate_depth"},
                 "explain");
      auto& x = c.explain;
      x.importance = e.value("importance", x.importance);
      x.shap = e.value("shap", x.shap);
      x.lime = e.value("lime", x.lime);
      x.surrogate = e.value("surrogate", x.surrogate);
      x.importance_repeats = e.value("importance_repeats", x.importance_repeats);
      x.shap_permutations = e.value("shap_permutations", x.shap_permutations);
      x.background_size = e.value("background_size", x.background_size);
      x.lime_samples = e.value("lime_samples", x.lime_samples);
      x.lime_kernel_width = e.value("lime_kernel_width", x.lime_kernel_width);
      x.surrogate_depth = e.value("surrogate_depth", x.surrogate_depth);
    }
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidConfig, std::string("malformed config: ") + e.what());
  }
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidConfig, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
  SweepConfig c = j.get<SweepConfig>();
  c.validate();
  return c;
}

// ---- seeds ----

namespace {

std::uint64_t rate_code(double rate) { return static_cast<std::uint64_t>(std::llround(rate * 1e6)); }

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, ModelFamily family, FlipScenario scenario, double rate) {
  return derive_seed(master, {hash_string(name(family)), hash_string(name(scenario)), rate_code(rate)});
}

std::uint64_t model_seed(std::uint64_t master, ModelFamily family) {
  return derive_seed(master, {hash_string(name(family)), hash_string("model")});
}

std::uint64_t data_seed(std::uint64_t master) { return derive_seed(master, "data"); }
std::uint64_t split_seed(std::uint64_t master) { return derive_seed(master, "split"); }

// ---- pipeline ----

Prepared prepare(const SweepConfig& config) {
  Prepared p;
  if (const auto* s = std::get_if<SynthSpec>(&config.data)) {
    p.data = synthesize(*s, data_seed(config.master_seed));
  } else {
    p.data = load_csv(std::get<CsvSource>(config.data).path);
  }
  p.split = split(p.data, config.train_fraction, config.stratified, split_seed(config.master_seed));
  p.scaler = ScalerParams::fit(p.split.train.features());
  return p;
}

namespace {

std::string cell_key(ModelFamily family, FlipScenario scenario, double rate) {
  std::ostringstream os;
  os << name(family) << '/' << name(scenario) << "/rate=" << rate;
  return os.str();
}

// Split used by one cell; the shared one unless the config asks for per-cell resampling.
const Prepared& cell_data(const SweepConfig& config, const Prepared& shared, std::uint64_t seed, Prepared& local) {
  if (!config.resplit_per_cell) return shared;
  local.data = shared.data;
  local.split = split(shared.data, config.train_fraction, config.stratified, derive_seed(split_seed(config.master_seed), {seed}));
  local.scaler = ScalerParams::fit(local.split.train.features());
  return local;
}

}  // namespace

std::vector<std::size_t> choose_instances(const LabelVector& truth, const LabelVector& predicted) {
  std::vector<std::size_t> rows;
  for (bool want_correct : {false, true}) {
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if ((truth[i] == predicted[i]) == want_correct) {
        rows.push_back(i);
        break;
      }
    }
  }
  return rows;
}

TrainedModel train_cell_model(const SweepConfig& config, const Prepared& prepared, ModelFamily family,
                              FlipScenario scenario, double rate, PoisonPlan* plan_out) {
  const Dataset& train = prepared.split.train;
  PoisonPlan plan = plan_flips(train.labels(), scenario, rate, cell_seed(config.master_seed, family, scenario, rate),
                               config.pool);
  const Dataset poisoned = apply(train, plan);
  // Poisoning leaves features untouched, so the shared scaler equals one refitted on `poisoned`.
  const Matrix x = prepared.scaler.transform(poisoned.features());
  TrainedModel model = fit(config.model_spec(family), x, poisoned.labels()).with_scaler(prepared.scaler);
  if (plan_out != nullptr) *plan_out = std::move(plan);
  return model;
}

CellResult run_cell(const SweepConfig& config, const Prepared& shared, ModelFamily family, FlipScenario scenario,
                    double rate) {
  const auto start = std::chrono::steady_clock::now();
  CellResult cell;
  cell.family = family;
  cell.scenario = scenario;
  cell.rate = rate;
  cell.seed = cell_seed(config.master_seed, family, scenario, rate);
  cell.model_seed = model_seed(config.master_seed, family);
  try {
    Prepared local;
    const Prepared& prepared = cell_data(config, shared, cell.seed, local);
    PoisonPlan plan;
    const TrainedModel model = train_cell_model(config, prepared, family, scenario, rate, &plan);
    cell.plan = {plan.pool, plan.n_rows, plan.requested, plan.effective_flips(), plan.flips.size() - plan.effective_flips()};

    const Dataset& test = prepared.split.test;
    const Matrix proba = model.predict_proba(test.features());
    cell.metrics = evaluate(test.labels(), proba);

    const auto& ex = config.explain;
    if (ex.any()) {
      CellExplanations out;
      const LabelVector predicted = argmax_rows(proba);
      out.instance_rows = choose_instances(test.labels(), predicted);
      const Matrix& train_x = prepared.split.train.features();
      if (ex.importance) {
        out.importance = permutation_importance(model, test.features(), test.labels(), ex.importance_repeats,
                                                derive_seed(cell.seed, "importance"));
      }
      const Matrix background =
          ex.shap ? sample_background(train_x, ex.background_size, derive_seed(cell.seed, "background")) : Matrix();
      for (std::size_t k = 0; k < out.instance_rows.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(out.instance_rows[k]);
        const std::span<const double> instance(test.features().row(r).data(), static_cast<std::size_t>(test.features().cols()));
        if (ex.shap) {
          ShapOptions so;
          so.n_permutations = ex.shap_permutations;
          out.shap.push_back(shap_values(model, instance, background, so, derive_seed(cell.seed, {hash_string("shap"), k})));
        }
        if (ex.lime) {
          LimeOptions lo;
          lo.n_samples = ex.lime_samples;
          lo.kernel_width = ex.lime_kernel_width;
          out.lime.push_back(lime_explain(model, instance, prepared.scaler, lo, derive_seed(cell.seed, {hash_string("lime"), k})));
        }
      }
      if (ex.surrogate) out.surrogate = surrogate_tree(model, train_x, ex.surrogate_depth);
      cell.explanations = std::move(out);
    }
  } catch (const Error& e) {
    fail(e.code(), cell_key(family, scenario, rate) + ": " + e.what());
  }
  cell.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

CellResult run_cell(const SweepConfig& config, ModelFamily family, FlipScenario scenario, double rate) {
  config.validate();
  return run_cell(config, prepare(config), family, scenario, rate);
}

// ---- sweep ----

const CellResult* ResultSet::find(ModelFamily family, FlipScenario scenario, double rate) const {
  for (const auto& c : cells) {
    if (c.family == family && c.scenario == scenario && std::abs(c.rate - rate) < 1e-12) return &c;
  }
  return nullptr;
}

std::size_t ResultSet::failures() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok(); }));
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ResultSet sweep(const SweepConfig& config, int jobs) {
  config.validate();
  const Prepared prepared = prepare(config);

  std::vector<ModelFamily> roster = config.roster;
  std::sort(roster.begin(), roster.end());
  std::vector<FlipScenario> scenarios = config.scenarios;
  std::sort(scenarios.begin(), scenarios.end());

  struct Task {
    ModelFamily family;
    FlipScenario scenario;
    double rate;
    std::ptrdiff_t copy_of;  // index of the computed rate-0 cell, or -1
  };
  std::vector<Task> tasks;
  for (ModelFamily f : roster) {
    for (FlipScenario s : scenarios) {
      for (double r : config.rates) {
        std::ptrdiff_t copy_of = -1;
        if (r == 0.0 && !config.resplit_per_cell && s != scenarios.front()) {
          for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].family == f && tasks[i].rate == 0.0 && tasks[i].copy_of < 0) copy_of = static_cast<std::ptrdiff_t>(i);
          }
        }
        tasks.push_back({f, s, r, copy_of});
      }
    }
  }

  std::vector<CellResult> cells(tasks.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].copy_of < 0) todo.push_back(i);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < todo.size(); k = next++) {
      const Task& t = tasks[todo[k]];
      CellResult& cell = cells[todo[k]];
      try {
        cell = run_cell(config, prepared, t.family, t.scenario, t.rate);
        spdlog::info("{} done in {:.0f} ms (accuracy {:.4f})", cell_key(t.family, t.scenario, t.rate),
                     cell.duration_ms, cell.metrics->accuracy);
      } catch (const std::exception& e) {
        cell = CellResult{};
        cell.family = t.family;
        cell.scenario = t.scenario;
        cell.rate = t.rate;
        cell.seed = cell_seed(config.master_seed, t.family, t.scenario, t.rate);
        cell.model_seed = model_seed(config.master_seed, t.family);
        cell.error = e.what();
        spdlog::error("{}", e.what());
      }
    }
  };
  const std::size_t n_threads =
      std::max<std::size_t>(1, std::min<std::size_t>(todo.size(), jobs > 0 ? static_cast<std::size_t>(jobs)
                                                                          : std::max(1u, std::thread::hardware_concurrency())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].copy_of < 0) continue;
    CellResult copy = cells[static_cast<std::size_t>(tasks[i].copy_of)];
    copy.scenario = tasks[i].scenario;
    copy.seed = cell_seed(config.master_seed, copy.family, copy.scenario, copy.rate);
    copy.duration_ms = 0.0;
    if (copy.error) copy.error = cell_key(copy.family, copy.scenario, copy.rate) + " (shared rate-0 cell): " + *copy.error;
    cells[i] = std::move(copy);
  }

  ResultSet rs;
  rs.config = config;
  rs.cells = std::move(cells);
  rs.version = std::string(version());
  rs.created = utc_now();
  return rs;
}

// ---- persistence ----

namespace {

nlohmann::json explanations_json(const CellExplanations& e) {
  nlohmann::json j{{"instance_rows", e.instance_rows}, {"shap", e.shap}, {"lime", e.lime}};
  j["importance"] = e.importance ? nlohmann::json(*e.importance) : nlohmann::json(nullptr);
  j["surrogate"] = e.surrogate ? nlohmann::json(*e.surrogate) : nlohmann::json(nullptr);
  return j;
}

CellExplanations explanations_from_json(const nlohmann::json& j) {
  CellExplanations e;
  e.instance_rows = j.at("instance_rows").get<std::vector<std::size_t>>();
  e.shap = j.at("shap").get<std::vector<LocalExplanation>>();
  e.lime = j.at("lime").get<std::vector<LocalExplanation>>();
  if (!j.at("importance").is_null()) e.importance = j.at("importance").get<ImportanceReport>();
  if (!j.at("surrogate").is_null()) e.surrogate = j.at("surrogate").get<SurrogateTree>();
  return e;
}

}  // namespace

void to_json(nlohmann::json& j, const CellResult& c) {
  j = nlohmann::json{{"family", name(c.family)},
                     {"scenario", name(c.scenario)},
                     {"rate", c.rate},
                     {"seed", c.seed},
                     {"model_seed", c.model_seed},
                     {"plan",
                      {{"pool", name(c.plan.pool)},
                       {"n_rows", c.plan.n_rows},
                       {"requested", c.plan.requested},
                       {"effective", c.plan.effective},
                       {"no_ops", c.plan.no_ops}}}};
  j["metrics"] = c.metrics ? nlohmann::json(*c.metrics) : nlohmann::json(nullptr);
  j["error"] = c.error ? nlohmann::json(*c.error) : nlohmann::json(nullptr);
  j["explanations"] = c.explanations ? explanations_json(*c.explanations) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, CellResult& c) {
  const auto family = parse_family(j.at("family").get<std::string>());
  const auto scenario = parse_scenario(j.at("scenario").get<std::string>());
  if (!family || !scenario) fail(ErrorCode::kParse, "bad cell key in results");
  c.family = *family;
  c.scenario = *scenario;
  c.rate = j.at("rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.model_seed = j.at("model_seed").get<std::uint64_t>();
  const auto& p = j.at("plan");
  const auto pool = parse_pool(p.at("pool").get<std::string>());
  if (!pool) fail(ErrorCode::kParse, "bad selection pool in results");
  c.plan = {*pool, p.at("n_rows").get<std::size_t>(), p.at("requested").get<std::size_t>(),
            p.at("effective").get<std::size_t>(), p.at("no_ops").get<std::size_t>()};
  c.metrics.reset();
  if (!j.at("metrics").is_null()) c.metrics = j.at("metrics").get<MetricsReport>();
  c.error.reset();
  if (!j.at("error").is_null()) c.error = j.at("error").get<std::string>();
  c.explanations.reset();
  if (j.contains("explanations") && !j.at("explanations").is_null()) c.explanations = explanations_from_json(j.at("explanations"));
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace

void write_results(const std::filesystem::path& dir, const ResultSet& results) {
  std::filesystem::create_directories(dir);
  std::string lines;
  for (const auto& c : results.cells) lines += nlohmann::json(c).dump() + '\n';
  write_file(dir / "cells.jsonl", lines);
  write_file(dir / "config.json",
             nlohmann::json{{"version", results.version}, {"config", results.config}}.dump(2) + '\n');
  nlohmann::json durations = nlohmann::json::array();
  for (const auto& c : results.cells) {
    durations.push_back({{"cell", cell_key(c.family, c.scenario, c.rate)}, {"duration_ms", c.duration_ms}});
  }
  write_file(dir / "run_info.json", nlohmann::json{{"created", results.created},
                                                   {"version", results.version},
                                                   {"failures", results.failures()},
                                                   {"durations", durations}}
                                            .dump(2) + '\n');
}

ResultSet read_results(const std::filesystem::path& dir) {
  ResultSet rs;
  const nlohmann::json cfg = read_json(dir / "config.json");
  try {
    rs.version = cfg.at("version").get<std::string>();
    rs.config = cfg.at("config").get<SweepConfig>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "config.json: " + std::string(e.what()));
  }
  std::ifstream in(dir / "cells.jsonl");
  if (!in) fail(ErrorCode::kIo, "cannot open " + (dir / "cells.jsonl").string());
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    try {
      rs.cells.push_back(nlohmann::json::parse(line).get<CellResult>());
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse, "cells.jsonl line " + std::to_string(no) + ": " + e.what());
    }
  }
  if (std::filesystem::exists(dir / "run_info.json")) {
    const nlohmann::json info = read_json(dir / "run_info.json");
    rs.created = info.value("created", std::string());
    const auto& d = info.value("durations", nlohmann::json::array());
    for (std::size_t i = 0; i < d.size() && i < rs.cells.size(); ++i) rs.cells[i].duration_ms = d[i].value("duration_ms", 0.0);
  }
  return rs;
}

}  // namespace fliplab

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"
#include "fliplab/harness.hpp"

namespace fliplab {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string pct(double v) { return fmt("%.2f", 100.0 * v); }
std::string rate_label(double rate) { return fmt("%g", 100.0 * rate) + "%"; }

void require_cells(const ResultSet& results) {
  if (results.cells.empty()) fail(ErrorCode::kEmptyResults, "result set has no cells");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::string cell_stem(const CellResult& cell) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "r%03ld", std::lround(cell.rate * 100.0));
  return std::string(name(cell.family)) + "_" + std::string(name(cell.scenario)) + "_" + buf;
}

std::string render_table_csv(const ResultSet& results, FlipScenario scenario) {
  require_cells(results);
  std::string out = "model,rate,accuracy,recall,precision,f1,log_loss,log_loss_value\n";
  for (const auto& c : results.cells) {
    if (c.scenario != scenario) continue;
    out += std::string(name(c.family)) + "," + rate_label(c.rate) + ",";
    if (!c.metrics) {
      out += "ERROR,ERROR,ERROR,ERROR,ERROR,\n";
      continue;
    }
    const auto& m = *c.metrics;
    out += pct(m.accuracy) + "," + pct(m.macro_recall) + "," + pct(m.macro_precision) + "," + pct(m.macro_f1) + ",";
    // Degenerate cells show a dash in the table column; the clipped number stays in the sidecar.
    out += m.degenerate_constant_prediction ? std::string("—") : fmt("%.3f", m.log_loss);
    out += "," + fmt("%.9g", m.log_loss) + "\n";
  }
  return out;
}

std::string render_contrast_csv(const ResultSet& results, double rate) {
  require_cells(results);
  std::string out = "model,rate,s1_log_loss,s2_log_loss,s1_minus_s2,s1_ge_s2\n";
  std::vector<ModelFamily> seen;
  for (const auto& c : results.cells) {
    if (std::find(seen.begin(), seen.end(), c.family) != seen.end()) continue;
    seen.push_back(c.family);
    const CellResult* s1 = results.find(c.family, FlipScenario::kS1ToHigh, rate);
    const CellResult* s2 = results.find(c.family, FlipScenario::kS2Rotate, rate);
    if (s1 == nullptr || s2 == nullptr) continue;
    out += std::string(name(c.family)) + "," + rate_label(rate) + ",";
    if (!s1->metrics || !s2->metrics) {
      out += ",,,n/a\n";
      continue;
    }
    const double a = s1->metrics->log_loss;
    const double b = s2->metrics->log_loss;
    out += fmt("%.6f", a) + "," + fmt("%.6f", b) + "," + fmt("%.6f", a - b) + "," + (a >= b ? "yes" : "no") + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> render_report(const ResultSet& results, const std::filesystem::path& dir) {
  require_cells(results);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  bool has[2] = {false, false};
  for (const auto& c : results.cells) has[static_cast<int>(c.scenario)] = true;
  for (FlipScenario s : kAllScenarios) {
    if (!has[static_cast<int>(s)]) continue;
    const auto path = dir / ("table_" + std::string(name(s)) + ".csv");
    write_text(path, render_table_csv(results, s));
    written.push_back(path);
  }
  if (has[0] && has[1]) {
    const auto path = dir / "scenario_contrast.csv";
    write_text(path, render_contrast_csv(results));
    written.push_back(path);
  }

  nlohmann::json forces = nlohmann::json::array();
  std::vector<std::string> names(feature_names().begin(), feature_names().end());
  std::string rules;
  for (const auto& c : results.cells) {
    if (!c.explanations) continue;
    const auto& e = *c.explanations;
    for (std::size_t k = 0; k < e.shap.size(); ++k) {
      nlohmann::json f = force_plot_json(e.shap[k], names);
      f["cell"] = cell_stem(c);
      f["test_row"] = k < e.instance_rows.size() ? e.instance_rows[k] : 0;
      forces.push_back(std::move(f));
    }
    if (e.surrogate) {
      rules += "# " + cell_stem(c) + " depth " + std::to_string(e.surrogate->max_depth) + " fidelity " +
               fmt("%.4f", e.surrogate->fidelity) + "\n";
      for (const auto& r : e.surrogate->rules) rules += to_string(r, names) + "\n";
      rules += "\n";
    }
  }
  if (!forces.empty()) {
    const auto path = dir / "force_plots.json";
    write_text(path, forces.dump(2) + "\n");
    written.push_back(path);
  }
  if (!rules.empty()) {
    const auto path = dir / "surrogate_rules.txt";
    write_text(path, rules);
    written.push_back(path);
  }
  return written;
}

}  // namespace fliplab

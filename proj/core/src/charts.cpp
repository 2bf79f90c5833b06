#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "fliplab/error.hpp"
#include "fliplab/harness.hpp"

namespace fliplab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start", int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" +
         std::to_string(size) + "\">" + escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke = "#444") {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
         "\" stroke=\"" + stroke + "\"/>\n";
}

std::string rect(double x, double y, double w, double h, const std::string& fill) {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"" + fill + "\"/>\n";
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string pct_label(double rate) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g%%", rate * 100.0);
  return buf;
}

void require_cells(const ResultSet& results) {
  if (results.cells.empty()) fail(ErrorCode::kEmptyResults, "result set has no cells");
}

// Horizontal signed bars with a zero axis, largest magnitude on top.
std::string signed_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                        const std::string& title, const std::string& subtitle) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  const int bar_h = 16;
  const int top = 56;
  const int left = 130;
  const int width = 620;
  const int plot_w = width - left - 60;
  const int height = top + static_cast<int>(values.size()) * bar_h + 30;
  double lo = 0.0;
  double hi = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo <= 0.0) hi = lo + 1.0;
  auto xpos = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };

  std::string s = header(width, height);
  s += text(width / 2.0, 20, title, "middle", 14);
  if (!subtitle.empty()) s += text(width / 2.0, 38, subtitle, "middle", 11);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t j = order[k];
    const double y = top + static_cast<double>(k) * bar_h;
    const double x0 = xpos(0.0);
    const double x1 = xpos(values[j]);
    s += "<g class=\"bar\" data-feature=\"" + escape(labels[j]) + "\">";
    s += rect(std::min(x0, x1), y + 2, std::abs(x1 - x0), bar_h - 4, values[j] >= 0.0 ? "#d62728" : "#1f77b4");
    s += text(left - 6, y + bar_h - 4, labels[j], "end", 11);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", values[j]);
    s += text(std::max(x0, x1) + 4, y + bar_h - 4, buf, "start", 10);
    s += "</g>\n";
  }
  s += line(xpos(0.0), top, xpos(0.0), top + static_cast<double>(values.size()) * bar_h);
  s += "</svg>\n";
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
}

}  // namespace

std::string accuracy_chart_svg(const ResultSet& results, FlipScenario scenario) {
  require_cells(results);
  std::vector<ModelFamily> families;
  std::vector<double> rates;
  for (const auto& c : results.cells) {
    if (c.scenario != scenario) continue;
    if (std::find(families.begin(), families.end(), c.family) == families.end()) families.push_back(c.family);
    if (std::none_of(rates.begin(), rates.end(), [&](double r) { return std::abs(r - c.rate) < 1e-12; })) {
      rates.push_back(c.rate);
    }
  }
  std::sort(rates.begin(), rates.end());
  const int width = 640;
  const int height = 400;
  const double left = 60;
  const double right = 170;
  const double top = 40;
  const double bottom = 50;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  const double max_rate = rates.empty() || rates.back() <= 0.0 ? 1.0 : rates.back();
  auto xpos = [&](double r) { return left + r / max_rate * pw; };
  auto ypos = [&](double acc) { return top + (1.0 - acc) * ph; };

  std::string s = header(width, height);
  s += text(width / 2.0, 22, "Accuracy vs poisoning rate (" + std::string(name(scenario)) + ")", "middle", 14);
  s += line(left, top, left, top + ph);
  s += line(left, top + ph, left + pw, top + ph);
  for (int t = 0; t <= 4; ++t) {
    const double acc = t / 4.0;
    s += line(left - 4, ypos(acc), left, ypos(acc));
    s += text(left - 8, ypos(acc) + 4, std::to_string(t * 25) + "%", "end", 10);
  }
  for (double r : rates) {
    s += line(xpos(r), top + ph, xpos(r), top + ph + 4);
    s += text(xpos(r), top + ph + 18, pct_label(r), "middle", 10);
  }
  s += text(left + pw / 2, height - 10, "poisoning rate", "middle", 11);

  for (std::size_t f = 0; f < families.size(); ++f) {
    const char* color = kPalette[f % 6];
    std::string points;
    std::string markers;
    for (double r : rates) {
      const CellResult* c = results.find(families[f], scenario, r);
      if (c == nullptr || !c->metrics) continue;
      if (!points.empty()) points += ' ';
      points += num(xpos(r)) + "," + num(ypos(c->metrics->accuracy));
      markers += "<circle cx=\"" + num(xpos(r)) + "\" cy=\"" + num(ypos(c->metrics->accuracy)) + "\" r=\"3\" fill=\"" +
                 color + "\"/>\n";
    }
    s += "<polyline class=\"series\" data-family=\"" + std::string(name(families[f])) + "\" fill=\"none\" stroke=\"" +
         color + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n" + markers;
    const double ly = top + 16.0 * static_cast<double>(f);
    s += rect(left + pw + 16, ly, 12, 12, color);
    s += text(left + pw + 34, ly + 10, std::string(name(families[f])), "start", 11);
  }
  s += "</svg>\n";
  return s;
}

std::string confusion_svg(const CellResult& cell) {
  if (!cell.metrics) fail(ErrorCode::kEmptyResults, "cell has no metrics");
  const auto& cm = cell.metrics->confusion;
  const double size = 70;
  const double left = 110;
  const double top = 70;
  std::string s = header(static_cast<int>(left + 4 * size + 30), static_cast<int>(top + 4 * size + 50));
  s += text(left + 2 * size, 22, std::string(name(cell.family)) + " " + std::string(name(cell.scenario)) + " " +
                                     pct_label(cell.rate),
            "middle", 14);
  s += text(left + 2 * size, 44, "predicted", "middle", 11);
  for (int t = 0; t < kNumClasses; ++t) {
    const std::string lbl(name(label_from_code(t)));
    s += text(left + (t + 0.5) * size, top - 8, lbl, "middle", 10);
    s += text(left - 8, top + (t + 0.5) * size + 4, lbl, "end", 10);
    const double row = static_cast<double>(cm.row_sum(t));
    for (int p = 0; p < kNumClasses; ++p) {
      const double share = row > 0 ? static_cast<double>(cm(t, p)) / row : 0.0;
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - 0.85 * share)));
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02xff", shade, shade);
      s += rect(left + p * size, top + t * size, size - 1, size - 1, fill);
      s += "<text class=\"count\" x=\"" + num(left + (p + 0.5) * size) + "\" y=\"" + num(top + (t + 0.5) * size + 5) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + std::to_string(cm(t, p)) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

std::string importance_svg(const ImportanceReport& report, const std::string& title) {
  std::vector<std::string> names(feature_names().begin(), feature_names().end());
  names.resize(report.importances.size());
  for (std::size_t j = feature_names().size(); j < names.size(); ++j) names[j] = "x" + std::to_string(j);
  char sub[96];
  std::snprintf(sub, sizeof sub, "baseline %s %.4f, %d repeats", report.metric.c_str(), report.baseline,
                report.n_repeats);
  std::string subtitle = sub;
  if (!report.feasible) subtitle = "not informative: " + report.note;
  return signed_bars(names, report.importances, title, subtitle);
}

std::string force_svg(const LocalExplanation& explanation, const std::string& title) {
  std::vector<std::string> names(feature_names().begin(), feature_names().end());
  names.resize(explanation.attributions.size());
  for (std::size_t j = feature_names().size(); j < names.size(); ++j) names[j] = "x" + std::to_string(j);
  char sub[128];
  std::snprintf(sub, sizeof sub, "%s for %s: base %.4f, output %.4f", std::string(name(explanation.method)).c_str(),
                std::string(name(explanation.explained_class)).c_str(), explanation.base_value,
                explanation.model_output);
  return signed_bars(names, explanation.attributions, title, sub);
}

std::vector<std::filesystem::path> render_charts(const ResultSet& results, const std::filesystem::path& dir) {
  require_cells(results);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& file, const std::string& svg) {
    const auto path = dir / file;
    write_text(path, svg);
    written.push_back(path);
  };
  for (FlipScenario s : kAllScenarios) {
    if (std::any_of(results.cells.begin(), results.cells.end(), [&](const CellResult& c) { return c.scenario == s; })) {
      emit("accuracy_" + std::string(name(s)) + ".svg", accuracy_chart_svg(results, s));
    }
  }
  for (const auto& c : results.cells) {
    if (!c.metrics) continue;
    const std::string stem = cell_stem(c);
    emit("confusion_" + stem + ".svg", confusion_svg(c));
    if (!c.explanations) continue;
    const auto& e = *c.explanations;
    if (e.importance) emit("importance_" + stem + ".svg", importance_svg(*e.importance, "Permutation importance " + stem));
    for (std::size_t k = 0; k < e.shap.size(); ++k) {
      const std::string row = std::to_string(k < e.instance_rows.size() ? e.instance_rows[k] : k);
      emit("force_" + stem + "_row" + row + ".svg", force_svg(e.shap[k], "SHAP " + stem + " test row " + row));
    }
    for (std::size_t k = 0; k < e.lime.size(); ++k) {
      const std::string row = std::to_string(k < e.instance_rows.size() ? e.instance_rows[k] : k);
      emit("lime_" + stem + "_row" + row + ".svg", force_svg(e.lime[k], "LIME " + stem + " test row " + row));
    }
  }
  return written;
}

}  // namespace fliplab

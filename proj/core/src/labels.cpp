#include "fliplab/labels.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "fliplab/error.hpp"

namespace fliplab {

RiskLabel label_from_code(int value) {
  if (value < 0 || value >= kNumClasses) {
    fail(ErrorCode::kUnknownLabel, "label code " + std::to_string(value));
  }
  return static_cast<RiskLabel>(value);
}

std::string_view name(RiskLabel label) {
  switch (label) {
    case RiskLabel::kLow: return "LOW";
    case RiskLabel::kNormal: return "NORMAL";
    case RiskLabel::kMedium: return "MEDIUM";
    case RiskLabel::kHigh: return "HIGH";
  }
  return "?";
}

std::optional<RiskLabel> parse_label(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  // Long forms: "Low-Risk", "Medium Risk", "High_Risk".
  for (std::string_view suffix : {"-RISK", "_RISK", "RISK"}) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) {
      s.resize(s.size() - suffix.size());
      break;
    }
  }
  for (RiskLabel label : kAllLabels) {
    if (s == name(label)) return label;
  }
  if (s.size() == 1 && s[0] >= '0' && s[0] <= '3') return static_cast<RiskLabel>(s[0] - '0');
  return std::nullopt;
}

RiskLabel argmax_label(const Eigen::Ref<const Eigen::RowVectorXd>& proba) {
  int best = 0;
  for (int c = 1; c < proba.size(); ++c) {
    if (proba[c] > proba[best]) best = c;
  }
  return static_cast<RiskLabel>(best);
}

}  // namespace fliplab

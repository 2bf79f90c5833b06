#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace fliplab {

inline constexpr int kNumClasses = 4;

enum class RiskLabel : std::uint8_t { kLow = 0, kNormal = 1, kMedium = 2, kHigh = 3 };

inline constexpr std::array<RiskLabel, kNumClasses> kAllLabels = {
    RiskLabel::kLow, RiskLabel::kNormal, RiskLabel::kMedium, RiskLabel::kHigh};

constexpr int code(RiskLabel label) { return static_cast<int>(label); }

// Throws Error(kUnknownLabel) outside [0, 4).
RiskLabel label_from_code(int code);

// Upper-case short name: LOW, NORMAL, MEDIUM, HIGH.
std::string_view name(RiskLabel label);

// Accepts short names and the long "X-Risk" forms, case-insensitively.
std::optional<RiskLabel> parse_label(std::string_view text);

using LabelVector = std::vector<RiskLabel>;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Index of the largest entry; ties go to the lowest index.
RiskLabel argmax_label(const Eigen::Ref<const Eigen::RowVectorXd>& proba);

}  // namespace fliplab

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fliplab/labels.hpp"

namespace fliplab {

inline constexpr int kNumElectrodes = 5;
inline constexpr int kNumBands = 5;
inline constexpr int kNumFeatures = kNumElectrodes * kNumBands;

inline constexpr std::array<std::string_view, kNumElectrodes> kElectrodes = {"AF3", "T7", "Pz",
                                                                             "T8", "AF4"};
inline constexpr std::array<std::string_view, kNumBands> kBands = {"THETA", "ALPHA", "LOW_BETA",
                                                                   "HIGH_BETA", "GAMMA"};

// Canonical column order: electrode-major, `<ELECTRODE>_<BAND>`.
const std::array<std::string, kNumFeatures>& feature_names();
constexpr int feature_index(int electrode, int band) { return electrode * kNumBands + band; }
std::optional<int> find_feature(std::string_view column_name);

struct BandDefinition {
  std::string_view name;
  double low_hz;
  double high_hz;
};

// Delta through Gamma, ordered by lower bound. Delta is documented but not a feature band.
const std::array<BandDefinition, 5>& band_definitions();

enum class FeatureSpace : std::uint8_t {
  kBandPower,     // raw, non-negative band powers
  kStandardized,  // output of standardize(); negative values allowed
};

struct Provenance {
  std::string source;
  std::uint64_t seed = 0;
};

// Immutable labelled feature table. Construction validates the invariants.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix features, LabelVector labels, std::vector<std::string> timestamps = {},
          Provenance provenance = {}, FeatureSpace space = FeatureSpace::kBandPower);

  const Matrix& features() const { return features_; }
  const LabelVector& labels() const { return labels_; }
  const std::vector<std::string>& timestamps() const { return timestamps_; }
  bool has_timestamps() const { return !timestamps_.empty(); }
  const Provenance& provenance() const { return provenance_; }
  FeatureSpace space() const { return space_; }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset with_labels(LabelVector labels) const;
  Dataset with_features(Matrix features, FeatureSpace space) const;

  std::array<std::size_t, kNumClasses> class_counts() const;

  friend bool operator==(const Dataset&, const Dataset&);

 private:
  Matrix features_{0, kNumFeatures};
  LabelVector labels_;
  std::vector<std::string> timestamps_;
  Provenance provenance_;
  FeatureSpace space_ = FeatureSpace::kBandPower;
};

// ---- CSV ----

Dataset read_csv(std::istream& in, std::string source = "csv");
Dataset load_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const Dataset& dataset);
void save_csv(const std::filesystem::path& path, const Dataset& dataset);

// ---- synthetic generator ----

struct SynthSpec {
  std::size_t n_samples = 1550;
  // LOW, NORMAL, MEDIUM, HIGH. Defaults give 375 HIGH rows of 1550, so a stratified 80/20 split
  // leaves 75 HIGH rows in a 310-row test set.
  std::array<double, kNumClasses> class_prevalences = {388.0 / 1550, 387.0 / 1550, 400.0 / 1550,
                                                       375.0 / 1550};
  double separation = 3.0;
  double noise_scale = 1.0;

  void validate() const;
};

// Class mean of log band power for (class, column).
double synth_log_mean(RiskLabel label, int column, double separation);

// Class counts are apportioned exactly (largest remainder) and then shuffled.
Dataset synthesize(const SynthSpec& spec, std::uint64_t seed);

// ---- split ----

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending
};

// Train size is round-half-up(train_fraction * n); stratified splits apportion it across classes
// by largest remainder.
Split split(const Dataset& dataset, double train_fraction, bool stratified, std::uint64_t seed);

// ---- standardization ----

struct ScalerParams {
  std::vector<double> mean;
  std::vector<double> stddev;

  static ScalerParams fit(const Matrix& features);
  // Identity transform over `n_features` columns.
  static ScalerParams identity(std::size_t n_features);

  Matrix transform(const Matrix& features) const;
  Matrix inverse_transform(const Matrix& standardized) const;
  std::size_t size() const { return mean.size(); }
};

struct Standardized {
  Dataset train;
  Dataset test;
  ScalerParams params;
};

Standardized standardize(const Dataset& train, const Dataset& test);

}  // namespace fliplab

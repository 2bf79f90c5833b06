#include "fliplab/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "fliplab/error.hpp"

namespace fliplab {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9)); }

// Largest-remainder apportionment of `total` units over the `exact` shares (ties to the lower index).
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& exact) {
  std::vector<std::size_t> out(exact.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    out[i] = static_cast<std::size_t>(std::floor(exact[i] + 1e-9));
    assigned += out[i];
  }
  std::vector<std::size_t> order(exact.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (exact[a] - std::floor(exact[a] + 1e-9)) > (exact[b] - std::floor(exact[b] + 1e-9));
  });
  for (std::size_t k = 0; assigned < total && k < order.size(); ++k, ++assigned) ++out[order[k]];
  return out;
}

}  // namespace

const std::array<std::string, kNumFeatures>& feature_names() {
  static const std::array<std::string, kNumFeatures> names = [] {
    std::array<std::string, kNumFeatures> n;
    for (int e = 0; e < kNumElectrodes; ++e) {
      for (int b = 0; b < kNumBands; ++b) {
        n[feature_index(e, b)] = std::string(kElectrodes[e]) + "_" + std::string(kBands[b]);
      }
    }
    return n;
  }();
  return names;
}

std::optional<int> find_feature(std::string_view column_name) {
  const std::string key = upper(column_name);
  // Some exports name the AF3 alpha column AF_ALPHA.
  if (key == "AF_ALPHA") return feature_index(0, 1);
  const auto& names = feature_names();
  for (int j = 0; j < kNumFeatures; ++j) {
    if (upper(names[j]) == key) return j;
  }
  return std::nullopt;
}

const std::array<BandDefinition, 5>& band_definitions() {
  static const std::array<BandDefinition, 5> bands = {{{"DELTA", 0.0, 4.0},
                                                       {"THETA", 4.0, 7.0},
                                                       {"ALPHA", 8.0, 13.0},
                                                       {"BETA", 14.0, 30.0},
                                                       {"GAMMA", 31.0, 100.0}}};
  return bands;
}

// ---- Dataset ----

Dataset::Dataset(Matrix features, LabelVector labels, std::vector<std::string> timestamps,
                 Provenance provenance, FeatureSpace space)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      timestamps_(std::move(timestamps)),
      provenance_(std::move(provenance)),
      space_(space) {
  if (features_.cols() != kNumFeatures) {
    fail(ErrorCode::kSchemaMismatch,
         "expected " + std::to_string(kNumFeatures) + " feature columns, got " +
             std::to_string(features_.cols()));
  }
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    fail(ErrorCode::kLengthMismatch, "feature rows " + std::to_string(features_.rows()) +
                                         " != labels " + std::to_string(labels_.size()));
  }
  if (!timestamps_.empty() && timestamps_.size() != labels_.size()) {
    fail(ErrorCode::kLengthMismatch, "timestamp count does not match row count");
  }
  for (Eigen::Index i = 0; i < features_.rows(); ++i) {
    for (Eigen::Index j = 0; j < features_.cols(); ++j) {
      const double v = features_(i, j);
      if (!std::isfinite(v)) {
        fail(ErrorCode::kNonNumericFeature,
             "row " + std::to_string(i) + " column " + feature_names()[j] + " is not finite");
      }
      if (space_ == FeatureSpace::kBandPower && v < 0.0) {
        fail(ErrorCode::kNegativeFeature,
             "row " + std::to_string(i) + " column " + feature_names()[j] + " = " +
                 std::to_string(v));
      }
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Matrix f(static_cast<Eigen::Index>(rows.size()), kNumFeatures);
  LabelVector l;
  l.reserve(rows.size());
  std::vector<std::string> ts;
  if (has_timestamps()) ts.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t r = rows[k];
    if (r >= size()) fail(ErrorCode::kIndexOutOfRange, "row " + std::to_string(r));
    f.row(static_cast<Eigen::Index>(k)) = features_.row(static_cast<Eigen::Index>(r));
    l.push_back(labels_[r]);
    if (has_timestamps()) ts.push_back(timestamps_[r]);
  }
  Dataset out;
  out.features_ = std::move(f);
  out.labels_ = std::move(l);
  out.timestamps_ = std::move(ts);
  out.provenance_ = provenance_;
  out.space_ = space_;
  return out;
}

Dataset Dataset::with_labels(LabelVector labels) const {
  if (labels.size() != size()) fail(ErrorCode::kLengthMismatch, "label vector size");
  Dataset out = *this;
  out.labels_ = std::move(labels);
  return out;
}

Dataset Dataset::with_features(Matrix features, FeatureSpace space) const {
  return Dataset(std::move(features), labels_, timestamps_, provenance_, space);
}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (RiskLabel l : labels_) ++counts[code(l)];
  return counts;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.space_ == b.space_ && a.labels_ == b.labels_ && a.timestamps_ == b.timestamps_ &&
         a.features_.rows() == b.features_.rows() && a.features_ == b.features_;
}

// ---- CSV ----

Dataset read_csv(std::istream& in, std::string source) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kMissingColumn, "empty file: no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_fields(line);
  std::array<int, kNumFeatures> column_of{};
  column_of.fill(-1);
  int label_col = -1;
  int timestamp_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string key = upper(header[c]);
    if (key == "LABEL") {
      label_col = static_cast<int>(c);
    } else if (key == "TIMESTAMP") {
      timestamp_col = static_cast<int>(c);
    } else if (auto j = find_feature(header[c])) {
      // Canonical name wins over the alias when both are present.
      if (column_of[*j] < 0 || key == upper(feature_names()[*j])) column_of[*j] = static_cast<int>(c);
    }
  }
  for (int j = 0; j < kNumFeatures; ++j) {
    if (column_of[j] < 0) fail(ErrorCode::kMissingColumn, feature_names()[j]);
  }
  if (label_col < 0) fail(ErrorCode::kMissingColumn, "label");

  std::vector<double> values;
  LabelVector labels;
  std::vector<std::string> timestamps;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    if (fields.size() < header.size()) {
      fail(ErrorCode::kMissingColumn, "row " + std::to_string(row) + " has " +
                                          std::to_string(fields.size()) + " fields, header has " +
                                          std::to_string(header.size()));
    }
    for (int j = 0; j < kNumFeatures; ++j) {
      const std::string_view text = fields[column_of[j]];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
        fail(ErrorCode::kNonNumericFeature, "row " + std::to_string(row) + " column " +
                                                feature_names()[j] + " value '" +
                                                std::string(text) + "'");
      }
      if (v < 0.0) {
        fail(ErrorCode::kNegativeFeature, "row " + std::to_string(row) + " column " +
                                              feature_names()[j] + " value " + std::string(text));
      }
      values.push_back(v);
    }
    const auto label = parse_label(fields[label_col]);
    if (!label) {
      fail(ErrorCode::kUnknownLabel,
           "row " + std::to_string(row) + " value '" + std::string(fields[label_col]) + "'");
    }
    labels.push_back(*label);
    if (timestamp_col >= 0) timestamps.emplace_back(fields[timestamp_col]);
  }

  Matrix features(static_cast<Eigen::Index>(labels.size()), kNumFeatures);
  std::copy(values.begin(), values.end(), features.data());
  return Dataset(std::move(features), std::move(labels), std::move(timestamps),
                 Provenance{std::move(source), 0});
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return read_csv(in, path.string());
}

void write_csv(std::ostream& out, const Dataset& dataset) {
  const auto& names = feature_names();
  for (int j = 0; j < kNumFeatures; ++j) out << names[j] << ',';
  if (dataset.has_timestamps()) out << "TIMESTAMP,";
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (int j = 0; j < kNumFeatures; ++j) {
      std::snprintf(buf, sizeof buf, "%.9g", dataset.features()(static_cast<Eigen::Index>(i), j));
      out << buf << ',';
    }
    if (dataset.has_timestamps()) out << dataset.timestamps()[i] << ',';
    out << name(dataset.labels()[i]) << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  write_csv(out, dataset);
}

// ---- synthetic generator ----

void SynthSpec::validate() const {
  if (n_samples < 8) fail(ErrorCode::kInvalidSpec, "n_samples must be >= 8");
  double sum = 0.0;
  for (double p : class_prevalences) {
    if (!(p >= 0.0)) fail(ErrorCode::kInvalidSpec, "class prevalences must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail(ErrorCode::kInvalidSpec, "class prevalences must sum to 1");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    fail(ErrorCode::kInvalidSpec, "separation must be non-negative");
  }
  if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) {
    fail(ErrorCode::kInvalidSpec, "noise_scale must be positive");
  }
}

double synth_log_mean(RiskLabel label, int column, double separation) {
  // Typical log band power falls with frequency; Pz carries the most class signal, T7/T8 less.
  static constexpr std::array<double, kNumBands> kBandBase = {2.5, 2.2, 1.6, 1.2, 0.8};
  static constexpr std::array<double, kNumElectrodes> kElectrodeWeight = {0.3, 0.6, 1.0, 0.6, 0.3};
  const int e = column / kNumBands;
  const int b = column % kNumBands;
  const double k = code(label) + 1.0;
  return kBandBase[b] + separation * kElectrodeWeight[e] * std::sin(1.7 * k * (b + 1) + 0.9 * e);
}

Dataset synthesize(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);

  std::vector<double> exact(kNumClasses);
  for (int c = 0; c < kNumClasses; ++c) exact[c] = spec.class_prevalences[c] * spec.n_samples;
  const auto counts = apportion(spec.n_samples, exact);
  LabelVector labels;
  labels.reserve(spec.n_samples);
  for (int c = 0; c < kNumClasses; ++c) labels.insert(labels.end(), counts[c], static_cast<RiskLabel>(c));
  std::shuffle(labels.begin(), labels.end(), rng);

  std::array<std::array<double, kNumFeatures>, kNumClasses> mu{};
  for (int c = 0; c < kNumClasses; ++c) {
    for (int j = 0; j < kNumFeatures; ++j) {
      mu[c][j] = synth_log_mean(static_cast<RiskLabel>(c), j, spec.separation);
    }
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix features(static_cast<Eigen::Index>(spec.n_samples), kNumFeatures);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const auto& m = mu[code(labels[i])];
    for (int j = 0; j < kNumFeatures; ++j) {
      features(static_cast<Eigen::Index>(i), j) = std::exp(m[j] + spec.noise_scale * normal(rng));
    }
  }
  return Dataset(std::move(features), std::move(labels), {}, Provenance{"synthetic", seed});
}

// ---- split ----

Split split(const Dataset& dataset, double train_fraction, bool stratified, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kInvalidSpec, "train_fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const std::size_t n_train = round_half_up(train_fraction * static_cast<double>(n));
  std::mt19937_64 rng(seed);

  std::vector<char> in_train(n, 0);
  if (stratified) {
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[code(dataset.labels()[i])].push_back(i);
    std::vector<double> exact(kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) {
      if (by_class[c].empty()) {
        fail(ErrorCode::kEmptyClass, "class " + std::string(name(static_cast<RiskLabel>(c))) +
                                         " has no samples; stratified split impossible");
      }
      exact[c] = train_fraction * static_cast<double>(by_class[c].size());
    }
    const auto quota = apportion(n_train, exact);
    for (int c = 0; c < kNumClasses; ++c) {
      std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
      for (std::size_t k = 0; k < quota[c] && k < by_class[c].size(); ++k) in_train[by_class[c][k]] = 1;
    }
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = 1;
  }

  Split out;
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? out.train_rows : out.test_rows).push_back(i);
  out.train = dataset.subset(out.train_rows);
  out.test = dataset.subset(out.test_rows);
  return out;
}

// ---- standardization ----

ScalerParams ScalerParams::fit(const Matrix& features) {
  if (features.rows() == 0) fail(ErrorCode::kEmpty, "cannot fit scaler on empty matrix");
  const auto d = static_cast<std::size_t>(features.cols());
  ScalerParams p;
  p.mean.resize(d);
  p.stddev.resize(d);
  const double n = static_cast<double>(features.rows());
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = features.col(static_cast<Eigen::Index>(j));
    if (col.maxCoeff() == col.minCoeff()) {
      p.mean[j] = col[0];
      p.stddev[j] = 1.0;
      continue;
    }
    const double mean = col.sum() / n;
    const double var = (col.array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    p.mean[j] = mean;
    p.stddev[j] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
  }
  return p;
}

ScalerParams ScalerParams::identity(std::size_t n_features) {
  return ScalerParams{std::vector<double>(n_features, 0.0), std::vector<double>(n_features, 1.0)};
}

Matrix ScalerParams::transform(const Matrix& features) const {
  if (static_cast<std::size_t>(features.cols()) != size()) {
    fail(ErrorCode::kSchemaMismatch, "scaler has " + std::to_string(size()) + " columns, input has " +
                                         std::to_string(features.cols()));
  }
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    out.col(j) = (features.col(j).array() - mean[j]) / stddev[j];
  }
  return out;
}

Matrix ScalerParams::inverse_transform(const Matrix& standardized) const {
  if (static_cast<std::size_t>(standardized.cols()) != size()) {
    fail(ErrorCode::kSchemaMismatch, "scaler column count mismatch");
  }
  Matrix out(standardized.rows(), standardized.cols());
  for (Eigen::Index j = 0; j < standardized.cols(); ++j) {
    out.col(j) = standardized.col(j).array() * stddev[j] + mean[j];
  }
  return out;
}

Standardized standardize(const Dataset& train, const Dataset& test) {
  if (train.empty()) fail(ErrorCode::kEmpty, "standardize requires a non-empty training set");
  if (train.features().cols() != test.features().cols()) {
    fail(ErrorCode::kSchemaMismatch, "train/test column counts differ");
  }
  Standardized out;
  out.params = ScalerParams::fit(train.features());
  out.train = train.with_features(out.params.transform(train.features()), FeatureSpace::kStandardized);
  out.test = test.with_features(out.params.transform(test.features()), FeatureSpace::kStandardized);
  return out;
}

}  // namespace fliplab

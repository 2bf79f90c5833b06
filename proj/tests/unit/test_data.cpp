#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fliplab/data.hpp"
#include "fliplab/error.hpp"
#include "fliplab/model.hpp"

namespace fliplab {
namespace {

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::string header_line(const std::vector<std::string>& names, const std::string& extra = "label") {
  std::string h;
  for (const auto& n : names) h += n + ",";
  return h + extra + "\n";
}

std::vector<std::string> canonical_names() { return {feature_names().begin(), feature_names().end()}; }

std::string row_line(double base, const std::string& label) {
  std::string r;
  for (int j = 0; j < kNumFeatures; ++j) r += std::to_string(base + j) + ",";
  return r + label + "\n";
}

TEST(Schema, TwentyFiveUniqueElectrodeBandNames) {
  const auto& names = feature_names();
  EXPECT_EQ(names.size(), 25u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), 25u);
  for (auto e : kElectrodes) {
    for (auto b : kBands) {
      EXPECT_TRUE(find_feature(std::string(e) + "_" + std::string(b)).has_value());
    }
  }
  EXPECT_EQ(names[feature_index(2, 1)], "Pz_ALPHA");
}

TEST(Schema, BandsAreOrderedAndDisjoint) {
  const auto& bands = band_definitions();
  for (std::size_t i = 1; i < bands.size(); ++i) {
    EXPECT_LT(bands[i - 1].low_hz, bands[i].low_hz);
    EXPECT_LE(bands[i - 1].high_hz, bands[i].low_hz);
  }
}

TEST(Dataset, RejectsInvalidContents) {
  Matrix x = Matrix::Ones(2, kNumFeatures);
  EXPECT_EQ(error_of([&] { Dataset(x, {RiskLabel::kLow}); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(error_of([&] { Dataset(Matrix::Ones(1, 24), {RiskLabel::kLow}); }), ErrorCode::kSchemaMismatch);
  Matrix neg = x;
  neg(1, 3) = -0.5;
  EXPECT_EQ(error_of([&] { Dataset(neg, {RiskLabel::kLow, RiskLabel::kHigh}); }), ErrorCode::kNegativeFeature);
  Matrix nan = x;
  nan(0, 0) = std::nan("");
  EXPECT_EQ(error_of([&] { Dataset(nan, {RiskLabel::kLow, RiskLabel::kHigh}); }), ErrorCode::kNonNumericFeature);
  // Standardized features may be negative.
  EXPECT_NO_THROW(Dataset(neg, {RiskLabel::kLow, RiskLabel::kHigh}, {}, {}, FeatureSpace::kStandardized));
}

TEST(Csv, ThreeRowFileLoads) {
  std::istringstream in(header_line(canonical_names()) + row_line(1, "LOW") + row_line(2, "High-Risk") +
                        row_line(3, "medium"));
  const Dataset d = read_csv(in);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.labels()[0], RiskLabel::kLow);
  EXPECT_EQ(d.labels()[1], RiskLabel::kHigh);
  EXPECT_EQ(d.labels()[2], RiskLabel::kMedium);
  EXPECT_DOUBLE_EQ(d.features()(1, 4), 6.0);
}

TEST(Csv, AcceptsAliasAndReordersColumns) {
  auto names = canonical_names();
  names[feature_index(0, 1)] = "AF_ALPHA";
  std::reverse(names.begin(), names.end());
  std::string body;
  for (int r = 0; r < 2; ++r) {
    std::string line;
    for (const auto& n : names) line += std::to_string(*find_feature(n) + 10 * r) + ",";
    body += line + "NORMAL\n";
  }
  std::istringstream in(header_line(names) + body);
  const Dataset d = read_csv(in);
  for (int j = 0; j < kNumFeatures; ++j) EXPECT_DOUBLE_EQ(d.features()(1, j), j + 10.0);

  std::ostringstream out;
  write_csv(out, d);
  EXPECT_NE(out.str().find("AF3_ALPHA"), std::string::npos);
  EXPECT_EQ(out.str().find("AF_ALPHA,"), std::string::npos);
}

TEST(Csv, MissingColumnIsNamed) {
  auto names = canonical_names();
  names.erase(std::find(names.begin(), names.end(), "Pz_GAMMA"));
  std::istringstream in(header_line(names));
  try {
    read_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingColumn);
    EXPECT_NE(std::string(e.what()).find("Pz_GAMMA"), std::string::npos);
  }
}

TEST(Csv, RowLevelErrors) {
  const std::string h = header_line(canonical_names());
  std::istringstream bad_label(h + row_line(1, "SEVERE"));
  try {
    read_csv(bad_label);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownLabel);
    EXPECT_NE(std::string(e.what()).find("SEVERE"), std::string::npos);
  }
  std::string text = row_line(1, "LOW");
  text.replace(0, text.find(','), "abc");
  std::istringstream non_numeric(h + text);
  EXPECT_EQ(error_of([&] { read_csv(non_numeric); }), ErrorCode::kNonNumericFeature);
  std::istringstream negative(h + row_line(-30, "LOW"));
  EXPECT_EQ(error_of([&] { read_csv(negative); }), ErrorCode::kNegativeFeature);
}

TEST(Csv, TimestampsArePreserved) {
  std::istringstream in("TIMESTAMP," + header_line(canonical_names()) + "t0," + row_line(1, "LOW") + "t1," +
                        row_line(2, "HIGH"));
  const Dataset d = read_csv(in);
  ASSERT_TRUE(d.has_timestamps());
  EXPECT_EQ(d.timestamps()[1], "t1");
  std::ostringstream out;
  write_csv(out, d);
  std::istringstream again(out.str());
  EXPECT_EQ(read_csv(again).timestamps(), d.timestamps());
}

TEST(Csv, RoundTripWithinNineDigitsAndIdempotent) {
  SynthSpec spec;
  spec.n_samples = 120;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset d = synthesize(spec, seed);
    std::ostringstream out;
    write_csv(out, d);
    std::istringstream in(out.str());
    const Dataset back = read_csv(in);
    ASSERT_EQ(back.labels(), d.labels());
    const double rel = ((back.features() - d.features()).array().abs() / d.features().array().abs()).maxCoeff();
    EXPECT_LE(rel, 5e-9);
    std::ostringstream out2;
    write_csv(out2, back);
    EXPECT_EQ(out.str(), out2.str());
  }
}

TEST(Synth, DeterministicAndExactCounts) {
  SynthSpec spec;
  const Dataset a = synthesize(spec, 7);
  const Dataset b = synthesize(spec, 7);
  EXPECT_TRUE(a == b);
  std::ostringstream sa;
  std::ostringstream sb;
  write_csv(sa, a);
  write_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_FALSE(a == synthesize(spec, 8));
  const auto counts = a.class_counts();
  EXPECT_EQ(counts[3], 375u);
  EXPECT_EQ(counts[0] + counts[1] + counts[2] + counts[3], 1550u);
  EXPECT_GE(a.features().minCoeff(), 0.0);
}

TEST(Synth, InvalidSpecs) {
  SynthSpec s;
  s.n_samples = 7;
  EXPECT_EQ(error_of([&] { synthesize(s, 1); }), ErrorCode::kInvalidSpec);
  s = SynthSpec{};
  s.class_prevalences = {0.5, 0.5, 0.1, 0.0};
  EXPECT_EQ(error_of([&] { synthesize(s, 1); }), ErrorCode::kInvalidSpec);
  s = SynthSpec{};
  s.noise_scale = 0.0;
  EXPECT_EQ(error_of([&] { synthesize(s, 1); }), ErrorCode::kInvalidSpec);
}

// Nearest class-centroid classifier in log space, used as an independent separability oracle.
double nearest_centroid_accuracy(const Dataset& train, const Dataset& test) {
  Matrix centroids = Matrix::Zero(kNumClasses, kNumFeatures);
  std::array<double, kNumClasses> n{};
  for (std::size_t i = 0; i < train.size(); ++i) {
    const int c = code(train.labels()[i]);
    centroids.row(c) += train.features().row(static_cast<Eigen::Index>(i)).array().log().matrix();
    n[c] += 1;
  }
  for (int c = 0; c < kNumClasses; ++c) centroids.row(c) /= n[c];
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Eigen::RowVectorXd v = test.features().row(static_cast<Eigen::Index>(i)).array().log();
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if ((centroids.row(c) - v).squaredNorm() < (centroids.row(best) - v).squaredNorm()) best = c;
    }
    hits += best == code(test.labels()[i]) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

TEST(Synth, SeparatedClassesAreLearnable) {
  SynthSpec spec;
  spec.class_prevalences = {0.25, 0.25, 0.26, 0.24};
  const Dataset d = synthesize(spec, 11);
  const Split s = split(d, 0.8, true, 5);
  ASSERT_GT(nearest_centroid_accuracy(s.train, s.test), 0.9);
  const TrainedModel rf = fit(ModelSpec::defaults(ModelFamily::kRandomForest, 3), s.train);
  const LabelVector pred = rf.predict(s.test.features());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == s.test.labels()[i] ? 1 : 0;
  EXPECT_GT(static_cast<double>(hits) / static_cast<double>(pred.size()), 0.9);
}

TEST(Synth, NoSeparationMeansNoSignal) {
  SynthSpec spec;
  spec.separation = 0.0;
  spec.class_prevalences = {0.4, 0.2, 0.2, 0.2};
  const Dataset d = synthesize(spec, 3);
  const Split s = split(d, 0.8, true, 5);
  // Identical class distributions: nothing beats the majority share by much.
  EXPECT_LT(nearest_centroid_accuracy(s.train, s.test), 0.4 + 0.08);
  ModelSpec rf = ModelSpec::defaults(ModelFamily::kRandomForest, 1);
  const LabelVector pred = fit(rf, s.train).predict(s.test.features());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == s.test.labels()[i] ? 1 : 0;
  EXPECT_LT(static_cast<double>(hits) / static_cast<double>(pred.size()), 0.4 + 0.08);
}

Dataset counted(const std::array<std::size_t, kNumClasses>& per_class) {
  LabelVector y;
  for (int c = 0; c < kNumClasses; ++c) y.insert(y.end(), per_class[c], label_from_code(c));
  Matrix x(static_cast<Eigen::Index>(y.size()), kNumFeatures);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i).setConstant(static_cast<double>(i));
  return Dataset(x, y);
}

TEST(Split, EightyTwentyPartition) {
  const Dataset d = counted({25, 25, 25, 25});
  const Split s = split(d, 0.8, false, 1);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_EQ(s.test.size(), 20u);
  std::set<std::size_t> all(s.train_rows.begin(), s.train_rows.end());
  for (std::size_t r : s.test_rows) EXPECT_TRUE(all.insert(r).second);
  EXPECT_EQ(all.size(), 100u);
}

TEST(Split, StratifiedExactQuotas) {
  const Split s = split(counted({10, 10, 10, 10}), 0.8, true, 9);
  for (std::size_t c : s.train.class_counts()) EXPECT_EQ(c, 8u);
}

TEST(Split, PartitionPropertyAcrossFractionsAndSeeds) {
  const Dataset d = counted({13, 7, 21, 9});
  for (double frac : {0.1, 0.33, 0.5, 0.8, 0.95}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (bool strat : {false, true}) {
        const Split s = split(d, frac, strat, seed);
        std::vector<std::size_t> all = s.train_rows;
        all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
        std::sort(all.begin(), all.end());
        ASSERT_EQ(all.size(), d.size());
        for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
        if (strat) {
          const auto full = d.class_counts();
          const auto tr = s.train.class_counts();
          for (int c = 0; c < kNumClasses; ++c) {
            const double expect = static_cast<double>(full[c]) * static_cast<double>(s.train.size()) /
                                  static_cast<double>(d.size());
            EXPECT_LE(std::abs(static_cast<double>(tr[c]) - expect), 1.0);
          }
        }
      }
    }
  }
}

TEST(Split, DeterministicAndErrors) {
  const Dataset d = counted({5, 5, 5, 5});
  EXPECT_EQ(split(d, 0.8, true, 4).train_rows, split(d, 0.8, true, 4).train_rows);
  EXPECT_EQ(error_of([&] { split(counted({5, 0, 5, 5}), 0.8, true, 1); }), ErrorCode::kEmptyClass);
  EXPECT_NO_THROW(split(counted({5, 0, 5, 5}), 0.8, false, 1));
  EXPECT_EQ(error_of([&] { split(d, 1.0, true, 1); }), ErrorCode::kInvalidSpec);
}

TEST(Standardize, TrainColumnsAreUnitScaled) {
  const Dataset d = synthesize(SynthSpec{}, 2);
  const Standardized s = standardize(d, d);
  const Matrix& z = s.train.features();
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double mean = z.col(j).mean();
    const double sd = std::sqrt((z.col(j).array() - mean).square().mean());
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(sd, 1.0, 1e-9);
  }
  EXPECT_EQ(s.train.space(), FeatureSpace::kStandardized);
}

TEST(Standardize, ConstantColumnAndSharedMap) {
  Matrix x = synthesize(SynthSpec{}, 2).features().topRows(50);
  x.col(4).setConstant(3.5);
  const ScalerParams p = ScalerParams::fit(x);
  EXPECT_EQ(p.stddev[4], 1.0);
  const Matrix z = p.transform(x);
  EXPECT_TRUE((z.col(4).array() == 0.0).all());
  // Same affine map for a test row equal to a train row.
  const Matrix row = x.row(7);
  EXPECT_EQ(Eigen::RowVectorXd(p.transform(row).row(0)), Eigen::RowVectorXd(z.row(7)));
  EXPECT_LE((p.inverse_transform(z) - x).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(error_of([&] { p.transform(Matrix::Ones(2, 24)); }), ErrorCode::kSchemaMismatch);
}

}  // namespace
}  // namespace fliplab

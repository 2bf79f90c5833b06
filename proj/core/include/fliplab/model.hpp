#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/adaboost.hpp"
#include "fliplab/data.hpp"
#include "fliplab/forest.hpp"
#include "fliplab/gbt.hpp"
#include "fliplab/knn.hpp"
#include "fliplab/mlp.hpp"

namespace fliplab {

enum class ModelFamily : std::uint8_t { kRandomForest, kExtraTrees, kAdaBoost, kGbt, kMlp, kKnn };

inline constexpr std::array<ModelFamily, 6> kAllFamilies = {
    ModelFamily::kRandomForest, ModelFamily::kExtraTrees, ModelFamily::kAdaBoost,
    ModelFamily::kGbt,          ModelFamily::kMlp,        ModelFamily::kKnn};

std::string_view name(ModelFamily family);  // RANDOM_FOREST, EXTRA_TREES, ADABOOST, GBT, MLP, KNN
// Also accepts short forms such as "rf", "et", "xgboost".
std::optional<ModelFamily> parse_family(std::string_view text);

using ModelParams = std::variant<ForestParams, AdaBoostParams, GbtParams, MlpParams, KnnParams>;

struct ModelSpec {
  ModelFamily family = ModelFamily::kRandomForest;
  ModelParams params;
  std::uint64_t seed = 0;

  static ModelSpec defaults(ModelFamily family, std::uint64_t seed = 0);
  // Throws kInvalidSpec if the params alternative does not match the family or is out of range.
  void validate() const;
  // Returns a copy with hyperparameters overridden by the keys present in `overrides`.
  ModelSpec with_overrides(const nlohmann::json& overrides) const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// A fitted model of any family, optionally preceded by an input scaler so callers can pass raw
// band-power features.
class TrainedModel : public Classifier {
 public:
  TrainedModel(ModelSpec spec, std::shared_ptr<const Classifier> model,
               std::optional<ScalerParams> scaler = std::nullopt);

  const ModelSpec& spec() const { return spec_; }
  ModelFamily family() const { return spec_.family; }
  const std::optional<ScalerParams>& scaler() const { return scaler_; }
  const Classifier& inner() const { return *model_; }
  TrainedModel with_scaler(std::optional<ScalerParams> scaler) const;

  std::size_t num_features() const override { return model_->num_features(); }
  Matrix predict_proba(const Matrix& features) const override;

  template <typename T>
  const T* as() const {
    return dynamic_cast<const T*>(model_.get());
  }

 private:
  ModelSpec spec_;
  std::shared_ptr<const Classifier> model_;
  std::optional<ScalerParams> scaler_;
};

// Fits on the given features as they are; no scaler is attached.
TrainedModel fit(const ModelSpec& spec, const Matrix& x, const LabelVector& y);
TrainedModel fit(const ModelSpec& spec, const Dataset& train);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);
void to_json(nlohmann::json& j, const ScalerParams& p);
void from_json(const nlohmann::json& j, ScalerParams& p);

}  // namespace fliplab

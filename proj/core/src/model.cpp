#include "fliplab/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fliplab/error.hpp"

namespace fliplab {

std::string_view name(ModelFamily family) {
  switch (family) {
    case ModelFamily::kRandomForest: return "RANDOM_FOREST";
    case ModelFamily::kExtraTrees: return "EXTRA_TREES";
    case ModelFamily::kAdaBoost: return "ADABOOST";
    case ModelFamily::kGbt: return "GBT";
    case ModelFamily::kMlp: return "MLP";
    case ModelFamily::kKnn: return "KNN";
  }
  return "?";
}

std::optional<ModelFamily> parse_family(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c == '-' || c == ' ') c = '_';
    t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  for (ModelFamily f : kAllFamilies) {
    if (t == name(f)) return f;
  }
  if (t == "RF" || t == "RANDOMFOREST") return ModelFamily::kRandomForest;
  if (t == "ET" || t == "EXTRATREES") return ModelFamily::kExtraTrees;
  if (t == "ADA") return ModelFamily::kAdaBoost;
  if (t == "XGBOOST" || t == "XGB") return ModelFamily::kGbt;
  return std::nullopt;
}

namespace {

std::size_t params_index(ModelFamily family) {
  switch (family) {
    case ModelFamily::kRandomForest:
    case ModelFamily::kExtraTrees: return 0;
    case ModelFamily::kAdaBoost: return 1;
    case ModelFamily::kGbt: return 2;
    case ModelFamily::kMlp: return 3;
    case ModelFamily::kKnn: return 4;
  }
  return 0;
}

nlohmann::json params_json(const ModelParams& params) {
  return std::visit([](const auto& p) { return nlohmann::json(p); }, params);
}

}  // namespace

ModelSpec ModelSpec::defaults(ModelFamily family, std::uint64_t seed) {
  ModelSpec spec;
  spec.family = family;
  spec.seed = seed;
  switch (family) {
    case ModelFamily::kRandomForest: spec.params = ForestParams::random_forest(); break;
    case ModelFamily::kExtraTrees: spec.params = ForestParams::extra_trees(); break;
    case ModelFamily::kAdaBoost: spec.params = AdaBoostParams{}; break;
    case ModelFamily::kGbt: spec.params = GbtParams{}; break;
    case ModelFamily::kMlp: spec.params = MlpParams{}; break;
    case ModelFamily::kKnn: spec.params = KnnParams{}; break;
  }
  return spec;
}

void ModelSpec::validate() const {
  if (params.index() != params_index(family)) {
    fail(ErrorCode::kInvalidSpec, "hyperparameters do not belong to family " + std::string(name(family)));
  }
  std::visit([](const auto& p) { p.validate(); }, params);
}

ModelSpec ModelSpec::with_overrides(const nlohmann::json& overrides) const {
  if (overrides.is_null()) return *this;
  if (!overrides.is_object()) fail(ErrorCode::kInvalidSpec, "hyperparameter overrides must be a JSON object");
  const nlohmann::json known = params_json(params);
  for (const auto& [key, value] : overrides.items()) {
    if (!known.contains(key)) {
      fail(ErrorCode::kInvalidSpec, "unknown hyperparameter '" + key + "' for " + std::string(name(family)));
    }
  }
  ModelSpec out = *this;
  try {
    std::visit([&](auto& p) { from_json(overrides, p); }, out.params);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidSpec, std::string("bad hyperparameter value: ") + e.what());
  }
  out.validate();
  return out;
}

// ---- TrainedModel ----

TrainedModel::TrainedModel(ModelSpec spec, std::shared_ptr<const Classifier> model,
                           std::optional<ScalerParams> scaler)
    : spec_(std::move(spec)), model_(std::move(model)), scaler_(std::move(scaler)) {
  if (!model_) fail(ErrorCode::kInvalidSpec, "trained model is null");
  if (scaler_ && scaler_->size() != model_->num_features()) {
    fail(ErrorCode::kSchemaMismatch, "scaler width differs from model input width");
  }
}

TrainedModel TrainedModel::with_scaler(std::optional<ScalerParams> scaler) const {
  return TrainedModel(spec_, model_, std::move(scaler));
}

Matrix TrainedModel::predict_proba(const Matrix& features) const {
  check_schema(features);
  if (scaler_) return model_->predict_proba(scaler_->transform(features));
  return model_->predict_proba(features);
}

TrainedModel fit(const ModelSpec& spec, const Matrix& x, const LabelVector& y) {
  spec.validate();
  if (y.empty()) fail(ErrorCode::kEmpty, "cannot fit on an empty training set");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    fail(ErrorCode::kLengthMismatch, "training features and labels differ in length");
  }
  std::shared_ptr<const Classifier> model;
  switch (spec.family) {
    case ModelFamily::kRandomForest:
    case ModelFamily::kExtraTrees:
      model = std::make_shared<ForestModel>(ForestModel::fit(x, y, std::get<ForestParams>(spec.params), spec.seed));
      break;
    case ModelFamily::kAdaBoost:
      model = std::make_shared<AdaBoostModel>(AdaBoostModel::fit(x, y, std::get<AdaBoostParams>(spec.params)));
      break;
    case ModelFamily::kGbt:
      model = std::make_shared<GbtModel>(GbtModel::fit(x, y, std::get<GbtParams>(spec.params)));
      break;
    case ModelFamily::kMlp:
      model = std::make_shared<MlpModel>(MlpModel::fit(x, y, std::get<MlpParams>(spec.params), spec.seed));
      break;
    case ModelFamily::kKnn:
      model = std::make_shared<KnnModel>(KnnModel::fit(x, y, std::get<KnnParams>(spec.params)));
      break;
  }
  return TrainedModel(spec, std::move(model));
}

TrainedModel fit(const ModelSpec& spec, const Dataset& train) { return fit(spec, train.features(), train.labels()); }

// ---- serialization ----

void to_json(nlohmann::json& j, const ModelSpec& spec) {
  j = nlohmann::json{{"family", name(spec.family)}, {"seed", spec.seed}, {"params", params_json(spec.params)}};
}

void from_json(const nlohmann::json& j, ModelSpec& spec) {
  const auto family = parse_family(j.at("family").get<std::string>());
  if (!family) fail(ErrorCode::kParse, "unknown model family '" + j.at("family").get<std::string>() + "'");
  spec = ModelSpec::defaults(*family, j.value("seed", std::uint64_t{0}));
  if (j.contains("params")) spec = spec.with_overrides(j.at("params"));
}

void to_json(nlohmann::json& j, const ScalerParams& p) {
  j = nlohmann::json{{"mean", p.mean}, {"stddev", p.stddev}};
}

void from_json(const nlohmann::json& j, ScalerParams& p) {
  p.mean = j.at("mean").get<std::vector<double>>();
  p.stddev = j.at("stddev").get<std::vector<double>>();
  if (p.mean.size() != p.stddev.size()) fail(ErrorCode::kParse, "scaler mean and stddev lengths differ");
  for (double s : p.stddev) {
    if (!(s > 0.0)) fail(ErrorCode::kParse, "scaler stddev must be positive");
  }
}

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json body;
  if (const auto* m = model.as<ForestModel>()) body = m->to_json();
  else if (const auto* m = model.as<AdaBoostModel>()) body = m->to_json();
  else if (const auto* m = model.as<GbtModel>()) body = m->to_json();
  else if (const auto* m = model.as<MlpModel>()) body = m->to_json();
  else if (const auto* m = model.as<KnnModel>()) body = m->to_json();
  else fail(ErrorCode::kInvalidSpec, "model type cannot be serialized");
  nlohmann::json j{{"format", "fliplab-model"},
                   {"version", kModelFormatVersion},
                   {"spec", model.spec()},
                   {"model", std::move(body)}};
  j["scaler"] = model.scaler() ? nlohmann::json(*model.scaler()) : nlohmann::json(nullptr);
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != "fliplab-model") fail(ErrorCode::kParse, "not a fliplab model document");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      fail(ErrorCode::kParse, "unsupported model format version " + std::to_string(version));
    }
    const ModelSpec spec = j.at("spec").get<ModelSpec>();
    const auto& body = j.at("model");
    std::shared_ptr<const Classifier> model;
    switch (spec.family) {
      case ModelFamily::kRandomForest:
      case ModelFamily::kExtraTrees: model = std::make_shared<ForestModel>(ForestModel::from_json(body)); break;
      case ModelFamily::kAdaBoost: model = std::make_shared<AdaBoostModel>(AdaBoostModel::from_json(body)); break;
      case ModelFamily::kGbt: model = std::make_shared<GbtModel>(GbtModel::from_json(body)); break;
      case ModelFamily::kMlp: model = std::make_shared<MlpModel>(MlpModel::from_json(body)); break;
      case ModelFamily::kKnn: model = std::make_shared<KnnModel>(KnnModel::from_json(body)); break;
    }
    std::optional<ScalerParams> scaler;
    if (j.contains("scaler") && !j.at("scaler").is_null()) scaler = j.at("scaler").get<ScalerParams>();
    return TrainedModel(spec, std::move(model), std::move(scaler));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed model JSON: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << model_to_json(model).dump() << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace fliplab

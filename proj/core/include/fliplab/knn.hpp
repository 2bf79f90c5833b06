#pragma once

#include <nlohmann/json_fwd.hpp>

#include "fliplab/classifier.hpp"

namespace fliplab {

struct KnnParams {
  int k = 5;

  void validate() const;
  friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

// Euclidean k-nearest-neighbour vote. Distance ties go to the lower training row index and the
// probabilities are raw vote fractions.
class KnnModel : public Classifier {
 public:
  KnnModel(Matrix train_x, LabelVector train_y, int k);

  static KnnModel fit(const Matrix& x, const LabelVector& y, const KnnParams& params);

  std::size_t num_features() const override { return static_cast<std::size_t>(train_x_.cols()); }
  Matrix predict_proba(const Matrix& features) const override;

  // Training-row indices of the k nearest neighbours of `row`, nearest first.
  std::vector<std::size_t> neighbours(const double* row) const;

  int k() const { return k_; }
  const Matrix& train_x() const { return train_x_; }
  const LabelVector& train_y() const { return train_y_; }

  nlohmann::json to_json() const;
  static KnnModel from_json(const nlohmann::json& j);

 private:
  Matrix train_x_;
  LabelVector train_y_;
  int k_;
};

void to_json(nlohmann::json& j, const KnnParams& p);
void from_json(const nlohmann::json& j, KnnParams& p);

}  // namespace fliplab

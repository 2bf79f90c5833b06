#pragma once

#include <cstddef>

#include "fliplab/labels.hpp"

namespace fliplab {

// Anything that maps a feature matrix to per-class probabilities (n x 4). Implementations are
// immutable after construction and safe for concurrent prediction.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::size_t num_features() const = 0;
  virtual Matrix predict_proba(const Matrix& features) const = 0;

  // Row-wise argmax of predict_proba, ties toward the lowest class code.
  LabelVector predict(const Matrix& features) const;

 protected:
  // Throws Error(kSchemaMismatch) if the column count is wrong.
  void check_schema(const Matrix& features) const;
};

LabelVector argmax_rows(const Matrix& proba);

}  // namespace fliplab

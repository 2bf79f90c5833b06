#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "fliplab/classifier.hpp"

namespace fliplab {

struct MlpParams {
  int hidden_units = 100;
  int batch_size = 32;
  double learning_rate = 0.01;
  int max_epochs = 200;

  void validate() const;
  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

// One hidden ReLU layer with a softmax output over the four classes.
struct MlpNetwork {
  Matrix w1;  // hidden x inputs
  Vector b1;  // hidden
  Matrix w2;  // classes x hidden
  Vector b2;  // classes

  std::size_t num_inputs() const { return static_cast<std::size_t>(w1.cols()); }
  std::size_t num_hidden() const { return static_cast<std::size_t>(w1.rows()); }
  std::size_t num_parameters() const;

  Matrix forward(const Matrix& x) const;  // probabilities

  // Mean cross-entropy over the batch and its gradient, laid out like flat_parameters().
  double loss_and_gradient(const Matrix& x, const LabelVector& y, Vector* gradient) const;

  // w1, b1, w2, b2, each row-major.
  Vector flat_parameters() const;
  void set_flat_parameters(const Vector& theta);

  // He-style uniform init, limit sqrt(6 / fan_in); biases zero.
  static MlpNetwork initialize(std::size_t inputs, std::size_t hidden, std::uint64_t seed);

  friend bool operator==(const MlpNetwork&, const MlpNetwork&) = default;
};

class MlpModel : public Classifier {
 public:
  explicit MlpModel(MlpNetwork network) : network_(std::move(network)) {}

  // Mini-batch SGD with a fixed step; rows are reshuffled every epoch. The output bias starts at
  // the clipped log class priors. Stops at max_epochs without signalling non-convergence.
  static MlpModel fit(const Matrix& x, const LabelVector& y, const MlpParams& params, std::uint64_t seed);

  std::size_t num_features() const override { return network_.num_inputs(); }
  Matrix predict_proba(const Matrix& features) const override;
  const MlpNetwork& network() const { return network_; }

  nlohmann::json to_json() const;
  static MlpModel from_json(const nlohmann::json& j);

 private:
  MlpNetwork network_;
};

void to_json(nlohmann::json& j, const MlpParams& p);
void from_json(const nlohmann::json& j, MlpParams& p);

}  // namespace fliplab

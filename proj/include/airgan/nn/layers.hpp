#pragma once

#include <Eigen/Dense>
#include <random>
#include <variant>

namespace airgan::nn {

/// Batches are stored one sample per row.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Mode { kTrain, kInference };

/// y = x W^T + b.
struct Dense {
  Matrix weights;  ///< out x in
  Vector bias;
  Matrix grad_weights;
  Vector grad_bias;
  Matrix input;  ///< cached by forward

  Dense(Eigen::Index in, Eigen::Index out);
  Eigen::Index in() const { return weights.cols(); }
  Eigen::Index out() const { return weights.rows(); }

  /// Uniform in +/- sqrt(6 / (in + out)); zero bias.
  void glorot_init(std::mt19937_64& rng);
};

/// Per-feature normalisation. Train mode uses batch statistics (population
/// variance) and updates the running estimates; inference mode uses the
/// running estimates.
struct BatchNorm {
  Vector gamma, beta;
  Vector running_mean, running_var;
  Vector grad_gamma, grad_beta;
  double epsilon = 1e-3;
  double momentum = 0.99;

  Matrix normalized;  ///< cached x_hat
  Vector inv_std;     ///< cached 1 / sqrt(var + eps)
  Mode cached_mode = Mode::kTrain;

  explicit BatchNorm(Eigen::Index features);
  Eigen::Index features() const { return gamma.size(); }
};

struct LeakyReLU {
  double slope = 0.2;
  Matrix input;
};

struct Sigmoid {
  Matrix output;
};

using Layer = std::variant<Dense, BatchNorm, LeakyReLU, Sigmoid>;

inline double leaky_relu(double x, double slope = 0.2) { return x >= 0.0 ? x : slope * x; }
double sigmoid(double x);

}  // namespace airgan::nn

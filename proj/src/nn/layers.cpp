#include "airgan/nn/layers.hpp"

#include <cmath>

namespace airgan::nn {

Dense::Dense(Eigen::Index in, Eigen::Index out)
    : weights(Matrix::Zero(out, in)),
      bias(Vector::Zero(out)),
      grad_weights(Matrix::Zero(out, in)),
      grad_bias(Vector::Zero(out)) {}

void Dense::glorot_init(std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in() + out()));
  std::uniform_real_distribution<double> u(-limit, limit);
  for (Eigen::Index i = 0; i < weights.size(); ++i) weights.data()[i] = u(rng);
  bias.setZero();
}

BatchNorm::BatchNorm(Eigen::Index features)
    : gamma(Vector::Ones(features)),
      beta(Vector::Zero(features)),
      running_mean(Vector::Zero(features)),
      running_var(Vector::Ones(features)),
      grad_gamma(Vector::Zero(features)),
      grad_beta(Vector::Zero(features)) {}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace airgan::nn

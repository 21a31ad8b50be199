#pragma once

#include "airgan/nn/layers.hpp"

namespace airgan::nn {

/// Predictions are clamped to [kProbabilityClamp, 1 - kProbabilityClamp].
inline constexpr double kProbabilityClamp = 1e-7;

struct LossResult {
  double loss = 0.0;
  Matrix grad_logits;  ///< d loss / d pre-sigmoid logit, same shape as the input
};

/// Mean binary cross-entropy of sigmoid outputs against 0/1 targets. The
/// gradient is the fused (p - t) / B w.r.t. the logits.
LossResult bce_loss(const Matrix& predictions, const Matrix& targets);

}  // namespace airgan::nn

#include "airgan/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "airgan/core/error.hpp"

namespace airgan::nn {

LossResult bce_loss(const Matrix& predictions, const Matrix& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw PreconditionError("bce_loss: predictions and targets differ in shape");
  }
  if (predictions.size() == 0) throw PreconditionError("bce_loss: empty batch");
  const auto count = static_cast<double>(predictions.size());
  LossResult r;
  r.grad_logits.resize(predictions.rows(), predictions.cols());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < predictions.size(); ++i) {
    const double raw = predictions.data()[i];
    const double t = targets.data()[i];
    const double p = std::clamp(raw, kProbabilityClamp, 1.0 - kProbabilityClamp);
    sum -= t * std::log(p) + (1.0 - t) * std::log1p(-p);
    r.grad_logits.data()[i] = (raw - t) / count;
  }
  r.loss = sum / count;
  return r;
}

}  // namespace airgan::nn

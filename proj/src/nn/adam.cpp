#include "airgan/nn/adam.hpp"

#include <cmath>

#include "airgan/core/error.hpp"

namespace airgan::nn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config) {
  if (params.size() != grads.size()) throw PreconditionError("adam_step: shape mismatch");
  if (state.m.empty() && state.v.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw PreconditionError("adam_step: optimiser state does not match the parameters");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

Adam::Adam(Network& network, AdamConfig config) : network_(&network), config_(config) {
  states_.resize(network.parameters().size());
}

void Adam::step() {
  auto blocks = network_->parameters();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    adam_step(blocks[i].value, blocks[i].grad, states_[i], config_);
  }
}

}  // namespace airgan::nn

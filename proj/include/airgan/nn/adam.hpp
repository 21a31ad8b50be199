#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "airgan/nn/network.hpp"

namespace airgan::nn {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

/// One bias-corrected Adam update. An empty state is sized on first use.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config);

/// Adam over every parameter block of one network.
class Adam {
 public:
  Adam(Network& network, AdamConfig config);
  void step();

 private:
  Network* network_;
  AdamConfig config_;
  std::vector<AdamState> states_;
};

}  // namespace airgan::nn

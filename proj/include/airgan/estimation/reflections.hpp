#pragma once

#include <span>
#include <vector>

#include "airgan/core/air_signal.hpp"

namespace airgan {

/// Direct path plus D early reflections. TOAs are absolute fractional sample
/// indices; kappa is strictly increasing and lies in (k_d, k_d + 24 ms].
struct EarlyReflectionSet {
  double k_d = 0.0;
  double beta_d = 0.0;
  std::vector<double> kappa;
  std::vector<double> beta;

  std::size_t size() const noexcept { return kappa.size(); }
};

struct PursuitOptions {
  std::size_t max_reflections = 78;
  double grid_step = 0.25;
  /// Stop once the best atom removes less than this fraction of the
  /// analysis-region energy.
  double min_energy_fraction = 1e-3;
  int refine_passes = 3;
};

/// Greedy matching pursuit over sinc-delayed copies of `excitation`.
///
/// The excitation's centre sample ((len - 1) / 2) is taken as its reference:
/// an atom at TOA tau places that sample at tau. The direct path is fitted
/// first at round(k_d); reflections are then searched on a 0.25-sample grid
/// over (k_d, k_d + 24 ms], refined continuously, and all scales are re-fitted
/// jointly after every pick.
EarlyReflectionSet estimate_reflections(const AirSignal& air, std::span<const double> excitation,
                                        std::size_t max_reflections);

EarlyReflectionSet estimate_reflections(const AirSignal& air, std::span<const double> excitation,
                                        const PursuitOptions& options);

}  // namespace airgan

#pragma once

#include <span>

#include "airgan/core/air_signal.hpp"
#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan {

struct TailFilter {
  Numerator b{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  Denominator a{};
  bool singular = false;          ///< normal equations were singular; defaults used
  std::size_t poles_removed = 0;  ///< unstable poles dropped after the fit
};

/// Prony fit of a 5-zero / 5-pole filter to `tail` (its impulse response).
/// Linear prediction over the first min(4000, len) samples, then the
/// numerator by forward substitution, then pole stabilisation.
TailFilter prony_fit(std::span<const double> tail);

/// prony_fit on the taps of `air` from `mixing_point` onwards.
/// Requires at least 50 tail samples.
TailFilter estimate_tail_iir(const AirSignal& air, std::size_t mixing_point);

}  // namespace airgan

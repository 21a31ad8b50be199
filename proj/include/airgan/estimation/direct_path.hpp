#pragma once

#include <cstddef>

#include "airgan/core/air_signal.hpp"

namespace airgan {

struct DirectPath {
  double toa = 0.0;          ///< fractional sample index of the direct sound
  double scale = 0.0;        ///< signed band-limited amplitude at `toa`
  std::size_t peak = 0;      ///< integer index of the local magnitude peak
};

/// First tap reaching half the peak magnitude, climbed to its local maximum
/// and refined by a parabola through the squared envelope.
/// Throws DegenerateInputError for an all-zero signal.
DirectPath detect_direct_path(const AirSignal& air);

/// Half-width of the direct-path window: 0.5 ms rounded to samples.
std::size_t direct_half_width(int sample_rate);

/// Sample index of the early/late boundary: round(k_d) + 24 ms.
std::size_t mixing_point(double direct_toa, int sample_rate);

}  // namespace airgan

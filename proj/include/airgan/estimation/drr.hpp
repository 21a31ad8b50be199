#pragma once

#include <cstddef>
#include <span>

#include "airgan/core/air_signal.hpp"
#include "airgan/estimation/reflections.hpp"

namespace airgan {

/// Half-open tap ranges used for every energy ratio.
struct Segments {
  std::size_t direct_begin = 0, direct_end = 0;
  std::size_t early_begin = 0, early_end = 0;
  std::size_t tail_begin = 0, tail_end = 0;
};

/// direct = round(k_d) +/- 0.5 ms, early = (direct end, n_m), tail = [n_m, length).
Segments drr_segments(double direct_toa, std::size_t mixing_point, int sample_rate,
                      std::size_t length);

double segment_energy(std::span<const double> taps, std::size_t begin, std::size_t end);

/// Ratios reported when a denominator energy is zero.
inline constexpr double kMaxEnergyRatio = 1e12;

struct DrrMeasurement {
  double eta1 = 0.0;  ///< direct / early energy
  double eta2 = 0.0;  ///< direct / tail energy
  bool capped = false;
};

DrrMeasurement measure_drr(std::span<const double> taps, const Segments& segments);
DrrMeasurement measure_drr(const AirSignal& air, const EarlyReflectionSet& reflections,
                           std::size_t mixing_point);

}  // namespace airgan

#include "airgan/estimation/drr.hpp"

#include <algorithm>
#include <cmath>

#include "airgan/core/error.hpp"
#include "airgan/estimation/direct_path.hpp"

namespace airgan {

Segments drr_segments(double direct_toa, std::size_t mixing_point, int sample_rate,
                      std::size_t length) {
  const auto center = static_cast<std::size_t>(std::llround(std::max(0.0, direct_toa)));
  const std::size_t half = direct_half_width(sample_rate);
  Segments s;
  s.direct_begin = center > half ? center - half : 0;
  s.direct_end = std::min(center + half + 1, length);
  s.early_begin = s.direct_end;
  s.early_end = std::clamp(mixing_point, s.early_begin, length);
  s.tail_begin = s.early_end;
  s.tail_end = length;
  return s;
}

double segment_energy(std::span<const double> taps, std::size_t begin, std::size_t end) {
  double e = 0.0;
  for (std::size_t i = begin; i < std::min(end, taps.size()); ++i) e += taps[i] * taps[i];
  return e;
}

DrrMeasurement measure_drr(std::span<const double> taps, const Segments& s) {
  if (s.direct_end <= s.direct_begin || s.early_end <= s.early_begin || s.tail_end <= s.tail_begin) {
    throw PreconditionError("measure_drr: empty segment");
  }
  const double direct = segment_energy(taps, s.direct_begin, s.direct_end);
  const double early = segment_energy(taps, s.early_begin, s.early_end);
  const double tail = segment_energy(taps, s.tail_begin, s.tail_end);
  DrrMeasurement m;
  const auto ratio = [&](double denom) {
    if (denom > 0.0) return std::min(direct / denom, kMaxEnergyRatio);
    m.capped = true;
    return kMaxEnergyRatio;
  };
  m.eta1 = ratio(early);
  m.eta2 = ratio(tail);
  if (m.eta1 >= kMaxEnergyRatio || m.eta2 >= kMaxEnergyRatio) m.capped = true;
  return m;
}

DrrMeasurement measure_drr(const AirSignal& air, const EarlyReflectionSet& reflections,
                           std::size_t mixing_point) {
  return measure_drr(air.taps(),
                     drr_segments(reflections.k_d, mixing_point, air.sample_rate(), air.size()));
}

}  // namespace airgan

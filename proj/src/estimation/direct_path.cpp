#include "airgan/estimation/direct_path.hpp"

#include <algorithm>
#include <cmath>

#include "airgan/core/error.hpp"
#include "airgan/core/fractional_delay.hpp"
#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan {

DirectPath detect_direct_path(const AirSignal& air) {
  const auto taps = air.taps();
  double peak = 0.0;
  for (double v : taps) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw DegenerateInputError("detect_direct_path: all-zero signal");

  std::size_t i = 0;
  while (std::abs(taps[i]) < 0.5 * peak) ++i;
  while (i + 1 < taps.size() && std::abs(taps[i + 1]) > std::abs(taps[i])) ++i;

  double offset = 0.0;
  if (i > 0 && i + 1 < taps.size()) {
    const double ym = taps[i - 1] * taps[i - 1];
    const double y0 = taps[i] * taps[i];
    const double yp = taps[i + 1] * taps[i + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) offset = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
  }
  DirectPath out;
  out.peak = i;
  out.toa = static_cast<double>(i) + offset;
  out.scale = sinc_interpolate(taps, out.toa);
  return out;
}

std::size_t direct_half_width(int sample_rate) {
  return static_cast<std::size_t>(std::lround(0.0005 * sample_rate));
}

std::size_t mixing_point(double direct_toa, int sample_rate) {
  return static_cast<std::size_t>(std::llround(direct_toa)) +
         static_cast<std::size_t>(std::lround(kEarlyWindowSeconds * sample_rate));
}

}  // namespace airgan

#include "airgan/core/fractional_delay.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace airgan {

namespace {

constexpr int kTaps = 2 * kSincHalfWidth;

// Kernel values k(j - frac) for j = -(H-1) .. H, normalised to unit sum.
std::array<double, kTaps> kernel_for(double frac) {
  std::array<double, kTaps> k{};
  double sum = 0.0;
  for (int i = 0; i < kTaps; ++i) {
    const int j = i - (kSincHalfWidth - 1);
    k[static_cast<std::size_t>(i)] = windowed_sinc(static_cast<double>(j) - frac);
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

double windowed_sinc(double x) {
  const double ax = std::abs(x);
  if (ax >= kSincHalfWidth) return 0.0;
  if (ax == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  const double hann = 0.5 * (1.0 + std::cos(std::numbers::pi * x / kSincHalfWidth));
  return std::sin(px) / px * hann;
}

void add_delayed(std::span<double> out, std::span<const double> excitation, double delay,
                 double scale) {
  if (scale == 0.0) return;
  const double base = std::floor(delay);
  const double frac = delay - base;
  const auto shift = static_cast<long>(base);
  const auto n_out = static_cast<long>(out.size());
  if (frac == 0.0) {
    for (std::size_t m = 0; m < excitation.size(); ++m) {
      const long n = static_cast<long>(m) + shift;
      if (n >= 0 && n < n_out) out[static_cast<std::size_t>(n)] += scale * excitation[m];
    }
    return;
  }
  const auto kernel = kernel_for(frac);
  for (std::size_t m = 0; m < excitation.size(); ++m) {
    const double e = scale * excitation[m];
    if (e == 0.0) continue;
    const long origin = static_cast<long>(m) + shift - (kSincHalfWidth - 1);
    for (int i = 0; i < kTaps; ++i) {
      const long n = origin + i;
      if (n >= 0 && n < n_out) out[static_cast<std::size_t>(n)] += e * kernel[static_cast<std::size_t>(i)];
    }
  }
}

double sinc_interpolate(std::span<const double> taps, double pos) {
  const double base = std::floor(pos);
  const double frac = pos - base;
  const auto i0 = static_cast<long>(base);
  const auto n = static_cast<long>(taps.size());
  if (frac == 0.0) return (i0 >= 0 && i0 < n) ? taps[static_cast<std::size_t>(i0)] : 0.0;
  // kernel[i] = k(j - (1 - frac)) with j = i - (H-1), which is k(pos - n) at n = i0 + 1 - j.
  const auto kernel = kernel_for(1.0 - frac);
  double acc = 0.0;
  for (int i = 0; i < kTaps; ++i) {
    const long j = i - (kSincHalfWidth - 1);
    const long idx = i0 + 1 - j;
    if (idx >= 0 && idx < n) acc += taps[static_cast<std::size_t>(idx)] * kernel[static_cast<std::size_t>(i)];
  }
  return acc;
}

}  // namespace airgan

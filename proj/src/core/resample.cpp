#include <cmath>
#include <numbers>
#include <vector>
#include <algorithm>

#include "airgan/core/air_signal.hpp"
#include "airgan/core/error.hpp"

namespace airgan {

namespace {

// Lowpass zero crossings kept on each side of the kernel centre.
constexpr double kZeroCrossings = 32.0;
// Passband edge as a fraction of the output Nyquist frequency.
constexpr double kRolloff = 0.95;
constexpr double kKaiserBeta = 8.6;

double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

AirSignal resample(const AirSignal& air, int target_rate) {
  if (target_rate <= 0) throw PreconditionError("resample: target rate must be positive");
  const int source_rate = air.sample_rate();
  if (target_rate > source_rate) {
    throw PreconditionError("resample: upsampling from " + std::to_string(source_rate) + " Hz to " +
                            std::to_string(target_rate) + " Hz is not supported");
  }
  if (target_rate == source_rate) return air;

  const double ratio = static_cast<double>(target_rate) / source_rate;
  const double cutoff = ratio * kRolloff;  // cycles per input sample * 2
  const double half_width = kZeroCrossings / cutoff;
  const double i0_beta = bessel_i0(kKaiserBeta);
  constexpr int kTable = 8192;
  std::vector<double> window(kTable + 2);
  for (int i = 0; i <= kTable + 1; ++i) {
    const double r = std::min(1.0, static_cast<double>(i) / kTable);
    window[static_cast<std::size_t>(i)] = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / i0_beta;
  }

  const auto input = air.taps();
  const auto n_in = static_cast<long>(input.size());
  const auto n_out = static_cast<std::size_t>(std::llround(static_cast<double>(n_in) * ratio));
  std::vector<double> out(std::max<std::size_t>(n_out, 1), 0.0);

  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = static_cast<double>(k) / ratio;
    const long lo = std::max(0L, static_cast<long>(std::ceil(t - half_width)));
    const long hi = std::min(n_in - 1, static_cast<long>(std::floor(t + half_width)));
    double acc = 0.0;
    for (long n = lo; n <= hi; ++n) {
      const double x = t - static_cast<double>(n);
      const double pos = std::abs(x) / half_width * kTable;
      const auto idx = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(idx);
      const double w = window[idx] + frac * (window[idx + 1] - window[idx]);
      acc += input[static_cast<std::size_t>(n)] * cutoff * sinc(cutoff * x) * w;
    }
    out[k] = acc;
  }
  return AirSignal(std::move(out), target_rate, air.room_label(), air.source_id());
}

}  // namespace airgan

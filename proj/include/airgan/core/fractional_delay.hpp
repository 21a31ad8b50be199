#pragma once

#include <span>

namespace airgan {

/// Half-width, in samples, of the Hann-windowed sinc used for every
/// fractional delay and band-limited interpolation in the library.
inline constexpr int kSincHalfWidth = 32;

/// Hann-windowed sinc evaluated at x (zero for |x| >= kSincHalfWidth).
double windowed_sinc(double x);

/// out[n] += scale * (excitation * sinc(. - delay))[n], with the kernel
/// normalised to unit DC gain. Integer delays reduce to an exact shift.
/// Contributions falling outside `out` are dropped.
void add_delayed(std::span<double> out, std::span<const double> excitation, double delay,
                 double scale);

/// Band-limited value of `taps` at fractional position `pos`.
double sinc_interpolate(std::span<const double> taps, double pos);

}  // namespace airgan

#pragma once

#include <span>
#include <vector>

#include "airgan/core/air_signal.hpp"

namespace airgan {

/// Upper sanity bound on any reverberation time, in seconds.
inline constexpr double kMaxT60 = 10.0;

/// Backward-integrated energy decay curve in dB, 0 dB at n = 0.
std::vector<double> schroeder_curve_db(std::span<const double> taps);

/// T60 from a least-squares line over the -5 dB .. -35 dB part of the
/// Schroeder curve. Throws DegenerateInputError when the usable span is under
/// 5 dB, the curve is not an exponential decay, or the result exceeds kMaxT60.
double estimate_t60(const AirSignal& air);
double estimate_t60(std::span<const double> taps, int sample_rate);

}  // namespace airgan

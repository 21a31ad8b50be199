#include "airgan/estimation/reverb_time.hpp"

#include <cmath>
#include <limits>

#include "airgan/core/error.hpp"

namespace airgan {

namespace {

constexpr double kFitUpperDb = -5.0;
constexpr double kFitLowerDb = -35.0;
constexpr double kMinSpanDb = 5.0;
// RMS distance of the curve from its fitted line above which the curve is
// not treated as a single exponential decay.
constexpr double kMaxFitRmsDb = 3.0;
// Allowed ratio between the slopes of the upper and lower halves of the fit.
constexpr double kMaxSlopeRatio = 3.0;

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line fit_line(const std::vector<double>& curve, std::size_t first, std::size_t last, double fs) {
  const auto count = static_cast<double>(last - first + 1);
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double t = static_cast<double>(i) / fs;
    st += t;
    sy += curve[i];
    stt += t * t;
    sty += t * curve[i];
  }
  Line line;
  line.slope = (count * sty - st * sy) / (count * stt - st * st);
  line.intercept = (sy - line.slope * st) / count;
  return line;
}

}  // namespace

std::vector<double> schroeder_curve_db(std::span<const double> taps) {
  std::vector<double> remaining(taps.size());
  double acc = 0.0;
  for (std::size_t i = taps.size(); i-- > 0;) {
    acc += taps[i] * taps[i];
    remaining[i] = acc;
  }
  const double total = acc;
  std::vector<double> db(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) {
    db[i] = remaining[i] > 0.0 ? 10.0 * std::log10(remaining[i] / total)
                               : -std::numeric_limits<double>::infinity();
  }
  return db;
}

double estimate_t60(const AirSignal& air) { return estimate_t60(air.taps(), air.sample_rate()); }

double estimate_t60(std::span<const double> taps, int sample_rate) {
  if (sample_rate <= 0) throw PreconditionError("estimate_t60: non-positive sample rate");
  double energy = 0.0;
  for (double v : taps) energy += v * v;
  if (!(energy > 0.0)) throw DegenerateInputError("estimate_t60: zero-energy signal");

  const auto curve = schroeder_curve_db(taps);
  std::size_t first = 0;
  while (first < curve.size() && curve[first] > kFitUpperDb) ++first;
  std::size_t last = first;
  while (last + 1 < curve.size() && curve[last + 1] >= kFitLowerDb) ++last;
  if (first >= curve.size() || kFitUpperDb - curve[last] < kMinSpanDb || last <= first + 1) {
    throw DegenerateInputError("estimate_t60: decay span shorter than 5 dB");
  }

  const double fs = sample_rate;
  const auto [slope, intercept] = fit_line(curve, first, last, fs);  // dB per second
  if (!(slope < 0.0)) throw DegenerateInputError("estimate_t60: curve does not decay");

  const auto count = static_cast<double>(last - first + 1);
  double sq = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double r = curve[i] - (intercept + slope * static_cast<double>(i) / fs);
    sq += r * r;
  }
  if (std::sqrt(sq / count) > kMaxFitRmsDb) {
    throw DegenerateInputError("estimate_t60: energy decay is not exponential");
  }
  // A truncated stationary signal bends sharply downward at its end.
  const std::size_t mid = first + (last - first) / 2;
  if (mid > first + 1 && last > mid + 1) {
    const double upper = fit_line(curve, first, mid, fs).slope;
    const double lower = fit_line(curve, mid, last, fs).slope;
    if (!(upper < 0.0) || lower / upper > kMaxSlopeRatio || upper / lower > kMaxSlopeRatio) {
      throw DegenerateInputError("estimate_t60: energy decay is not exponential");
    }
  }
  const double t60 = -60.0 / slope;
  if (t60 > kMaxT60) {
    throw DegenerateInputError("estimate_t60: estimate " + std::to_string(t60) +
                               " s exceeds the 10 s sanity bound");
  }
  return t60;
}

}  // namespace airgan

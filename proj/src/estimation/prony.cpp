#include "airgan/estimation/prony.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "airgan/core/error.hpp"
#include "airgan/estimation/poles.hpp"

namespace airgan {

namespace {

constexpr std::size_t kMaxFitSamples = 4000;
constexpr std::size_t kMinTailSamples = 50;
// Singular values below this fraction of the largest count as zero.
constexpr double kRankThreshold = 1e-9;

}  // namespace

TailFilter prony_fit(std::span<const double> tail) {
  constexpr auto R = static_cast<long>(kDenominatorLength);
  constexpr std::size_t P = kNumeratorLength - 1;
  const std::size_t n = std::min(tail.size(), kMaxFitSamples);
  if (n < kMinTailSamples) {
    throw PreconditionError("prony_fit: tail has " + std::to_string(tail.size()) +
                            " samples, need at least " + std::to_string(kMinTailSamples));
  }

  // Linear prediction x[k] = -sum_j a_j x[k-j] for k > P, solved as a
  // rank-revealing least-squares problem (minimum norm when the tail has
  // fewer than R modes).
  const auto rows = static_cast<long>(n - P - 1);
  Eigen::MatrixXd lagged(rows, R);
  Eigen::VectorXd target(rows);
  for (long r = 0; r < rows; ++r) {
    const std::size_t k = P + 1 + static_cast<std::size_t>(r);
    target(r) = -tail[k];
    for (long j = 0; j < R; ++j) lagged(r, j) = tail[k - 1 - static_cast<std::size_t>(j)];
  }

  TailFilter out;
  const double scale = lagged.norm();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    out.singular = true;
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solver(lagged);
  solver.setThreshold(kRankThreshold);
  const Eigen::VectorXd a = solver.solve(target);
  if (solver.rank() == 0 || !a.allFinite()) {
    out.singular = true;
    return out;
  }

  for (long j = 0; j < R; ++j) out.a[static_cast<std::size_t>(j)] = a(j);
  for (std::size_t i = 0; i <= P; ++i) {
    double acc = tail[i];
    for (std::size_t j = 1; j <= std::min<std::size_t>(i, kDenominatorLength); ++j) {
      acc += out.a[j - 1] * tail[i - j];
    }
    out.b[i] = acc;
  }
  const auto stable = stabilize_denominator(out.a);
  if (stable.failed) {
    out.a = {};
    out.singular = true;
  } else {
    out.a = stable.a;
    out.poles_removed = stable.removed;
  }
  return out;
}

TailFilter estimate_tail_iir(const AirSignal& air, std::size_t mixing_point) {
  if (mixing_point >= air.size()) {
    throw PreconditionError("estimate_tail_iir: mixing point beyond the AIR");
  }
  return prony_fit(air.taps().subspan(mixing_point));
}

}  // namespace airgan

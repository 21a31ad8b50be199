#include "airgan/estimation/poles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace airgan {

std::vector<std::complex<double>> monic_roots(std::span<const double> coeffs) {
  std::size_t n = coeffs.size();
  // Trailing zero coefficients are roots at the origin.
  std::size_t zeros_at_origin = 0;
  while (n > 0 && coeffs[n - 1] == 0.0) {
    --n;
    ++zeros_at_origin;
  }
  std::vector<std::complex<double>> roots(zeros_at_origin, {0.0, 0.0});
  if (n == 0) return roots;
  if (n == 1) {
    roots.emplace_back(-coeffs[0], 0.0);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t j = 0; j < n; ++j) companion(0, static_cast<long>(j)) = -coeffs[j];
  for (std::size_t i = 1; i < n; ++i) companion(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) return {};
  const auto& ev = solver.eigenvalues();
  for (long i = 0; i < ev.size(); ++i) roots.push_back(ev(i));
  return roots;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  std::size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
  if (lead + 1 >= coeffs.size()) return {};
  std::vector<double> monic;
  for (std::size_t i = lead + 1; i < coeffs.size(); ++i) monic.push_back(coeffs[i] / coeffs[lead]);
  return monic_roots(monic);
}

std::vector<std::complex<double>> denominator_poles(std::span<const double> a) {
  return monic_roots(a);
}

double max_pole_radius(std::span<const double> a) {
  double r = 0.0;
  for (const auto& p : denominator_poles(a)) r = std::max(r, std::abs(p));
  return r;
}

StabilizedDenominator stabilize_denominator(std::span<const double> a) {
  StabilizedDenominator out;
  const auto n = std::min(a.size(), out.a.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(a[i])) {
      out.failed = true;
      return out;
    }
  }
  const auto poles = denominator_poles(a.first(n));
  if (poles.size() != n) {
    out.failed = true;
    return out;
  }
  std::vector<std::complex<double>> kept;
  for (const auto& p : poles) {
    if (std::abs(p) > kStablePoleRadius) {
      ++out.removed;
    } else {
      kept.push_back(p);
    }
  }
  if (out.removed == 0) {
    std::copy_n(a.begin(), n, out.a.begin());
    return out;
  }
  // prod (z - p) = z^k + c_1 z^(k-1) + ... + c_k
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& p : kept) {
    poly.emplace_back(0.0);
    for (std::size_t i = poly.size() - 1; i > 0; --i) poly[i] -= p * poly[i - 1];
  }
  for (std::size_t i = 1; i < poly.size(); ++i) out.a[i - 1] = poly[i].real();
  return out;
}

}  // namespace airgan

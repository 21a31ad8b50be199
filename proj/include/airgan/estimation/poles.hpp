#pragma once

#include <complex>
#include <span>
#include <vector>

#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan {

/// Largest pole radius accepted as stable.
inline constexpr double kStablePoleRadius = 1.0 - 1e-6;

/// Roots of z^n + c[0] z^(n-1) + ... + c[n-1] (companion-matrix eigenvalues).
std::vector<std::complex<double>> monic_roots(std::span<const double> coeffs);

/// Roots of c[0] z^(n-1) + ... + c[n-1]; leading zero coefficients are skipped.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Poles of 1 / (1 + sum_j a_j z^-j).
std::vector<std::complex<double>> denominator_poles(std::span<const double> a);

/// Largest pole magnitude (0 when the denominator is trivial).
double max_pole_radius(std::span<const double> a);

struct StabilizedDenominator {
  Denominator a{};
  std::size_t removed = 0;  ///< poles dropped for lying outside the stable radius
  bool failed = false;      ///< root finding failed; `a` was zeroed
};

/// Drops every pole with |p| > kStablePoleRadius and re-expands the remaining
/// poles into a reduced-order denominator, zero-filling the unused slots.
StabilizedDenominator stabilize_denominator(std::span<const double> a);

}  // namespace airgan

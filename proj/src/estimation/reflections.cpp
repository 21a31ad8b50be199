#include "airgan/estimation/reflections.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "airgan/core/error.hpp"
#include "airgan/core/fractional_delay.hpp"
#include "airgan/estimation/direct_path.hpp"
#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan {

namespace {

constexpr int kGoldenIterations = 24;

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

// Sparse approximation of one analysis region by delayed excitation atoms.
// All positions are absolute sample indices; atoms are stored restricted to
// the region [begin, end).
class Pursuit {
 public:
  Pursuit(std::span<const double> taps, std::span<const double> excitation, std::size_t begin,
          std::size_t end)
      : excitation_(excitation),
        center_(static_cast<double>((excitation.size() - 1) / 2)),
        begin_(begin),
        target_(taps.begin() + static_cast<long>(begin), taps.begin() + static_cast<long>(end)) {}

  double region_energy() const { return dot(target_, target_); }

  std::vector<double> atom(double toa) const {
    std::vector<double> a(target_.size(), 0.0);
    add_delayed(a, excitation_, toa - center_ - static_cast<double>(begin_), 1.0);
    return a;
  }

  // Energy removed by the best scaling of atom(toa) against `residual`.
  double reduction(double toa, std::span<const double> residual) const {
    const auto a = atom(toa);
    const double norm = dot(a, a);
    if (!(norm > 0.0)) return 0.0;
    const double c = dot(a, residual);
    return c * c / norm;
  }

  // Golden-section maximisation of reduction() over [lo, hi].
  double refine(double lo, double hi, std::span<const double> residual) const {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = reduction(x1, residual), f2 = reduction(x2, residual);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = reduction(x2, residual);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = reduction(x1, residual);
      }
    }
    return f1 > f2 ? x1 : x2;
  }

  void add(double toa) {
    toas_.push_back(toa);
    atoms_.push_back(atom(toa));
    refit();
  }

  void move(std::size_t i, double toa) {
    toas_[i] = toa;
    atoms_[i] = atom(toa);
    refit();
  }

  // Residual with atom i's contribution restored.
  std::vector<double> residual_without(std::size_t i) const {
    std::vector<double> r = residual_;
    for (std::size_t n = 0; n < r.size(); ++n) r[n] += scales_[i] * atoms_[i][n];
    return r;
  }

  const std::vector<double>& residual() const { return residual_; }
  const std::vector<double>& toas() const { return toas_; }
  const std::vector<double>& scales() const { return scales_; }

  // Best grid position in [lo, hi] (step `step`), by reduction on the residual.
  std::pair<double, double> grid_search(double lo, double hi, double step) const {
    // One precomputed atom per fractional phase; correlations are then
    // sliding dot products against the residual.
    const auto phases = static_cast<int>(std::lround(1.0 / step));
    const auto len = static_cast<long>(excitation_.size()) + 2 * kSincHalfWidth;
    const auto n = static_cast<long>(residual_.size());
    double best_toa = lo, best_red = -1.0;
    for (int p = 0; p < phases; ++p) {
      const double phase = p * step;
      std::vector<double> shape(static_cast<std::size_t>(len), 0.0);
      add_delayed(shape, excitation_, kSincHalfWidth - 1 + phase, 1.0);
      // shape[j] is the atom value at region index floor(start) + j - (H - 1).
      for (double toa = std::ceil((lo - phase) - 1e-9) + phase; toa <= hi + 1e-9; toa += 1.0) {
        if (toa < lo - 1e-9) continue;
        const double start = toa - center_ - static_cast<double>(begin_);
        const long origin = static_cast<long>(std::floor(start + 1e-9)) - (kSincHalfWidth - 1);
        double c = 0.0, norm = 0.0;
        const long j0 = std::max(0L, -origin);
        const long j1 = std::min(len, n - origin);
        for (long j = j0; j < j1; ++j) {
          const double s = shape[static_cast<std::size_t>(j)];
          c += s * residual_[static_cast<std::size_t>(origin + j)];
          norm += s * s;
        }
        if (norm <= 0.0) continue;
        const double red = c * c / norm;
        if (red > best_red) {
          best_red = red;
          best_toa = toa;
        }
      }
    }
    return {best_toa, best_red};
  }

 private:
  void refit() {
    const auto k = static_cast<long>(atoms_.size());
    Eigen::MatrixXd gram(k, k);
    Eigen::VectorXd rhs(k);
    for (long i = 0; i < k; ++i) {
      rhs(i) = dot(atoms_[static_cast<std::size_t>(i)], target_);
      for (long j = 0; j <= i; ++j) {
        gram(i, j) = gram(j, i) =
            dot(atoms_[static_cast<std::size_t>(i)], atoms_[static_cast<std::size_t>(j)]);
      }
    }
    gram.diagonal().array() += 1e-12 * gram.diagonal().maxCoeff();
    const Eigen::VectorXd s = gram.ldlt().solve(rhs);
    scales_.assign(s.data(), s.data() + k);
    residual_ = target_;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      for (std::size_t n = 0; n < residual_.size(); ++n) residual_[n] -= scales_[i] * atoms_[i][n];
    }
  }

  std::span<const double> excitation_;
  double center_;
  std::size_t begin_;
  std::vector<double> target_;
  std::vector<double> toas_;
  std::vector<std::vector<double>> atoms_;
  std::vector<double> scales_;
  std::vector<double> residual_;
};

}  // namespace

EarlyReflectionSet estimate_reflections(const AirSignal& air, std::span<const double> excitation,
                                        std::size_t max_reflections) {
  PursuitOptions options;
  options.max_reflections = max_reflections;
  return estimate_reflections(air, excitation, options);
}

EarlyReflectionSet estimate_reflections(const AirSignal& air, std::span<const double> excitation,
                                        const PursuitOptions& options) {
  if (excitation.empty()) throw PreconditionError("estimate_reflections: empty excitation");
  if (options.max_reflections > kMaxReflections) {
    throw PreconditionError("estimate_reflections: max_reflections exceeds " +
                            std::to_string(kMaxReflections));
  }
  const auto direct = detect_direct_path(air);
  const auto anchor = static_cast<long>(std::llround(direct.toa));
  const double offset = direct.toa - static_cast<double>(anchor);
  const auto window = static_cast<long>(std::lround(kEarlyWindowSeconds * air.sample_rate()));
  const auto n = static_cast<long>(air.size());
  const auto len = static_cast<long>(excitation.size());
  const long center = (len - 1) / 2;

  const long begin = std::max(0L, anchor - center - kSincHalfWidth);
  const long end = std::min(n, anchor + window + (len - center));
  if (anchor + 1 >= n || end <= anchor + 1) {
    throw PreconditionError("estimate_reflections: empty early window");
  }

  Pursuit pursuit(air.taps(), excitation, static_cast<std::size_t>(begin),
                  static_cast<std::size_t>(end));
  pursuit.add(static_cast<double>(anchor));

  const double lo = static_cast<double>(anchor) + options.grid_step;
  const double hi = static_cast<double>(std::min(anchor + window, n - 1));
  const double threshold = options.min_energy_fraction * pursuit.region_energy();
  while (pursuit.toas().size() - 1 < options.max_reflections) {
    const auto [grid_toa, grid_red] = pursuit.grid_search(lo, hi, options.grid_step);
    if (grid_red < threshold) break;
    const double toa = pursuit.refine(std::max(lo, grid_toa - options.grid_step),
                                      std::min(hi, grid_toa + options.grid_step), pursuit.residual());
    if (pursuit.reduction(toa, pursuit.residual()) < threshold) break;
    pursuit.add(toa);
  }

  // Local re-optimisation of each reflection TOA with the others held fixed.
  for (int pass = 0; pass < options.refine_passes; ++pass) {
    for (std::size_t i = 1; i < pursuit.toas().size(); ++i) {
      const double t = pursuit.toas()[i];
      const auto residual = pursuit.residual_without(i);
      const double moved = pursuit.refine(std::max(lo, t - 0.5), std::min(hi, t + 0.5), residual);
      if (pursuit.reduction(moved, residual) > pursuit.reduction(t, residual)) pursuit.move(i, moved);
    }
  }

  EarlyReflectionSet out;
  out.k_d = direct.toa;
  out.beta_d = pursuit.scales()[0];
  std::vector<std::size_t> order(pursuit.toas().size() - 1);
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return pursuit.toas()[x] < pursuit.toas()[y]; });
  for (std::size_t i : order) {
    const double toa = pursuit.toas()[i] + offset;
    if (!out.kappa.empty() && !(toa > out.kappa.back())) {
      out.beta.back() += pursuit.scales()[i];
      continue;
    }
    out.kappa.push_back(toa);
    out.beta.push_back(pursuit.scales()[i]);
  }
  return out;
}

}  // namespace airgan

#include "airgan/synthesis/synthesis.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "airgan/core/error.hpp"
#include "airgan/core/fractional_delay.hpp"
#include "airgan/estimation/direct_path.hpp"
#include "airgan/estimation/poles.hpp"

namespace airgan {

MixMode parse_mix_mode(std::string_view name) {
  if (name == "verbatim") return MixMode::kVerbatim;
  if (name == "continuous") return MixMode::kContinuous;
  throw PreconditionError("unknown mix mode '" + std::string(name) +
                          "' (expected verbatim or continuous)");
}

std::string_view to_string(MixMode mode) {
  return mode == MixMode::kVerbatim ? "verbatim" : "continuous";
}

std::vector<double> place_atom(double scale, double toa, std::span<const double> excitation,
                               std::size_t length) {
  if (excitation.empty()) throw PreconditionError("place_atom: empty excitation");
  if (!(toa >= 0.0)) throw PreconditionError("place_atom: negative TOA");
  if (toa >= static_cast<double>(length)) throw PreconditionError("place_atom: TOA beyond output length");
  std::vector<double> out(length, 0.0);
  add_delayed(out, excitation, toa, scale);
  return out;
}

std::vector<double> synth_direct(const LowDimRep& /*rep*/, std::span<const double> excitation,
                                 const SynthesisConfig& cfg, double beta_d) {
  return place_atom(beta_d, 0.0, excitation, cfg.length);
}

std::vector<double> synth_early(const LowDimRep& rep, std::span<const double> excitation,
                                const SynthesisConfig& cfg) {
  if (excitation.empty()) throw PreconditionError("synth_early: empty excitation");
  std::vector<double> out(cfg.length, 0.0);
  const auto toas = rep.toas();
  const auto scales = rep.scales();
  for (std::size_t i = 0; i < toas.size(); ++i) {
    if (!(toas[i] >= 0.0) || toas[i] >= static_cast<double>(cfg.length)) {
      throw PreconditionError("synth_early: TOA outside the output");
    }
    add_delayed(out, excitation, toas[i], scales[i]);
  }
  return out;
}

std::vector<double> synth_polack(double t60, std::size_t length, const SynthesisConfig& cfg) {
  if (!(t60 > 0.0)) throw PreconditionError("synth_polack: T60 must be positive");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double rate = 3.0 * std::numbers::ln10 / (t60 * cfg.sample_rate);
  std::vector<double> out(length);
  for (std::size_t n = 0; n < length; ++n) {
    out[n] = noise(rng) * std::exp(-rate * static_cast<double>(n));
  }
  return out;
}

std::vector<double> apply_tail_iir(std::span<const double> tail, std::span<const double> b,
                                   std::span<const double> a) {
  if (max_pole_radius(a) > kStablePoleRadius) {
    throw PreconditionError("apply_tail_iir: unstable denominator; stabilise poles first");
  }
  std::vector<double> out(tail.size(), 0.0);
  for (std::size_t n = 0; n < tail.size(); ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size() && i <= n; ++i) acc += b[i] * tail[n - i];
    for (std::size_t j = 1; j <= a.size() && j <= n; ++j) acc -= a[j - 1] * out[n - j];
    out[n] = acc;
  }
  return out;
}

std::vector<double> apply_crossfade(std::span<const double> tail, std::size_t direct_toa,
                                    std::size_t mixing_point, MixMode mode) {
  const std::size_t length = tail.size();
  if (!(direct_toa < mixing_point && mixing_point < length)) {
    throw PreconditionError("apply_crossfade: need direct_toa < mixing_point < length");
  }
  if (tail[0] == 0.0) throw DegenerateInputError("apply_crossfade: tail starts at zero");
  const double norm = tail[0];
  const auto at = [&](long idx) {
    return (idx >= 0 && idx < static_cast<long>(length)) ? tail[static_cast<std::size_t>(idx)] / norm
                                                         : 0.0;
  };
  const auto kd = static_cast<long>(direct_toa);
  const auto nm = static_cast<long>(mixing_point);
  std::vector<double> out(length, 0.0);
  for (long n = kd; n < static_cast<long>(length); ++n) {
    long idx = 0;
    if (mode == MixMode::kVerbatim) {
      idx = n < nm ? 2 * nm - n + kd : n - nm - kd;
    } else {
      idx = n < nm ? nm - n : n - nm;
    }
    out[static_cast<std::size_t>(n)] = at(idx);
  }
  return out;
}

SynthesisParts synthesize_parts(const LowDimRep& rep, std::span<const double> excitation,
                                const SynthesisConfig& cfg) {
  if (excitation.empty()) throw PreconditionError("synthesize_parts: empty excitation");
  if (cfg.sample_rate <= 0) throw PreconditionError("synthesize_parts: bad sample rate");
  SynthesisParts parts;
  parts.direct_toa = (excitation.size() - 1) / 2;
  parts.mixing_point = mixing_point(static_cast<double>(parts.direct_toa), cfg.sample_rate);
  if (cfg.length <= parts.mixing_point + 1) {
    throw PreconditionError("synthesize_parts: output shorter than the mixing point");
  }
  parts.direct = synth_direct(rep, excitation, cfg);
  parts.early = synth_early(rep, excitation, cfg);
  const auto noise = synth_polack(rep.t60(), cfg.length, cfg);
  const auto b = rep.b();
  const auto a = rep.a();
  const auto filtered = apply_tail_iir(noise, b, a);
  parts.late = apply_crossfade(filtered, parts.direct_toa, parts.mixing_point, cfg.mix_mode);
  parts.segments = drr_segments(static_cast<double>(parts.direct_toa), parts.mixing_point,
                                cfg.sample_rate, cfg.length);
  return parts;
}

namespace {

using Quadratic = Eigen::Matrix3d;

// Gram matrix of (direct, early, late) restricted to [begin, end).
Quadratic segment_gram(const SynthesisParts& p, std::size_t begin, std::size_t end) {
  Quadratic q = Quadratic::Zero();
  const std::array<const std::vector<double>*, 3> x{&p.direct, &p.early, &p.late};
  for (std::size_t n = begin; n < end; ++n) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j <= i; ++j) q(i, j) += (*x[static_cast<std::size_t>(i)])[n] * (*x[static_cast<std::size_t>(j)])[n];
    }
  }
  return q.selfadjointView<Eigen::Lower>();
}

}  // namespace

MixGains solve_mix_gains(const SynthesisParts& parts, double eta1, double eta2) {
  const auto& s = parts.segments;
  const Quadratic qd = segment_gram(parts, s.direct_begin, s.direct_end);
  const Quadratic qe = segment_gram(parts, s.early_begin, s.early_end);
  const Quadratic qt = segment_gram(parts, s.tail_begin, s.tail_end);
  bool has_early = false;
  for (double v : parts.early) has_early = has_early || v != 0.0;
  if (!(eta2 > 0.0) || (has_early && !(eta1 > 0.0))) {
    throw PreconditionError("solve_mix_gains: energy ratios must be positive");
  }
  if (!(qd(0, 0) > 0.0)) throw DegenerateInputError("solve_mix_gains: direct part has no energy");
  if (!(qt(2, 2) > 0.0)) throw DegenerateInputError("solve_mix_gains: tail has no energy");
  if (has_early && !(qe(1, 1) > 0.0)) {
    throw DegenerateInputError("solve_mix_gains: early reflections have no energy in the early segment");
  }

  // Closed form from the component energies in their own segments.
  Eigen::Vector2d u;
  u(0) = has_early ? 0.5 * std::log(qd(0, 0) / (eta1 * qe(1, 1))) : 0.0;
  u(1) = 0.5 * std::log(qd(0, 0) / (eta2 * qt(2, 2)));

  const auto residual = [&](const Eigen::Vector2d& x, Eigen::Matrix2d* jac) {
    const Eigen::Vector3d v(1.0, has_early ? std::exp(x(0)) : 0.0, std::exp(x(1)));
    const Eigen::Vector3d gd = qd * v, ge = qe * v, gt = qt * v;
    const double ed = v.dot(gd), ee = v.dot(ge), et = v.dot(gt);
    Eigen::Vector2d r(has_early ? std::log(ed) - std::log(ee) - std::log(eta1) : 0.0,
                      std::log(ed) - std::log(et) - std::log(eta2));
    if (jac != nullptr) {
      // d log E / d u_k = 2 (Q v)_k g_k / E
      for (int k = 0; k < 2; ++k) {
        const double g = v(k + 1);
        const double dd = 2.0 * gd(k + 1) * g / ed;
        (*jac)(0, k) = has_early ? dd - 2.0 * ge(k + 1) * g / ee : 0.0;
        (*jac)(1, k) = dd - 2.0 * gt(k + 1) * g / et;
      }
      if (!has_early) {
        (*jac)(0, 0) = 1.0;
        (*jac)(0, 1) = 0.0;
      }
    }
    return r;
  };

  Eigen::Matrix2d jac;
  Eigen::Vector2d r = residual(u, &jac);
  for (int it = 0; it < 100 && r.cwiseAbs().maxCoeff() > 1e-13; ++it) {
    const Eigen::Vector2d step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) break;
    double t = 1.0;
    Eigen::Vector2d next = u + step;
    Eigen::Vector2d rn = residual(next, nullptr);
    while (!(rn.squaredNorm() < r.squaredNorm()) && t > 1e-6) {
      t *= 0.5;
      next = u + t * step;
      rn = residual(next, nullptr);
    }
    if (!(rn.squaredNorm() < r.squaredNorm())) break;
    u = next;
    r = residual(u, &jac);
  }
  if (!(r.cwiseAbs().maxCoeff() < 1e-9)) {
    throw DegenerateInputError("solve_mix_gains: cannot impose the requested energy ratios");
  }
  return {has_early ? std::exp(u(0)) : 0.0, std::exp(u(1))};
}

AirSignal assemble(const LowDimRep& rep, std::span<const double> excitation,
                   const SynthesisConfig& cfg) {
  const auto parts = synthesize_parts(rep, excitation, cfg);
  const auto gains = solve_mix_gains(parts, rep.eta1(), rep.eta2());
  std::vector<double> taps(cfg.length);
  for (std::size_t n = 0; n < taps.size(); ++n) {
    const double v = parts.direct[n] + gains.early * parts.early[n] + gains.late * parts.late[n];
    taps[n] = static_cast<double>(static_cast<float>(v));
  }
  return AirSignal(std::move(taps), cfg.sample_rate);
}

std::size_t pick_excitation(const ExcitationBank& bank, std::uint64_t seed) {
  if (bank.empty()) throw PreconditionError("decode: empty excitation bank");
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, bank.excitations.size() - 1);
  return pick(rng);
}

AirSignal decode(const LowDimRep& rep, const ExcitationBank& bank, const SynthesisConfig& cfg) {
  const std::size_t index = pick_excitation(bank, cfg.seed);
  return assemble(rep, bank.excitations[index], cfg);
}

}  // namespace airgan

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "airgan/core/air_signal.hpp"
#include "airgan/estimation/drr.hpp"
#include "airgan/estimation/excitation_bank.hpp"
#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan {

/// How the stochastic tail is faded in around the mixing point.
///  - kVerbatim: the literal three-branch piecewise fade, with the tail taken as
///    zero for negative indices.
///  - kContinuous: mirror-symmetric fade-in whose envelope peaks at unity
///    exactly at the mixing point.
enum class MixMode { kVerbatim, kContinuous };

MixMode parse_mix_mode(std::string_view name);
std::string_view to_string(MixMode mode);

struct SynthesisConfig {
  std::size_t length = kDatasetLength;
  int sample_rate = kDatasetSampleRate;
  MixMode mix_mode = MixMode::kContinuous;
  std::uint64_t seed = 0;
};

/// scale * (excitation * sinc(n - toa)), truncated to `length` taps. The
/// excitation's first sample lands at `toa`.
std::vector<double> place_atom(double scale, double toa, std::span<const double> excitation,
                               std::size_t length);

/// Direct sound: the excitation at the origin with scale `beta_d`.
std::vector<double> synth_direct(const LowDimRep& rep, std::span<const double> excitation,
                                 const SynthesisConfig& cfg, double beta_d = 1.0);

/// Sum of one atom per encoded reflection.
std::vector<double> synth_early(const LowDimRep& rep, std::span<const double> excitation,
                                const SynthesisConfig& cfg);

/// Gaussian noise under an exponential envelope reaching -60 dB at t60.
/// Noise is drawn from cfg.seed.
std::vector<double> synth_polack(double t60, std::size_t length, const SynthesisConfig& cfg);

/// Direct-form IIR recursion with zero initial state. Throws
/// PreconditionError if the denominator has a pole outside the stable radius.
std::vector<double> apply_tail_iir(std::span<const double> tail, std::span<const double> b,
                                   std::span<const double> a);

/// Cross-fade of a filtered tail around `mixing_point`; zero before
/// `direct_toa`, normalised by tail[0]. Throws DegenerateInputError if
/// tail[0] is zero.
std::vector<double> apply_crossfade(std::span<const double> tail, std::size_t direct_toa,
                                    std::size_t mixing_point, MixMode mode);

/// Unscaled model components on a common time axis, plus the construction
/// segments the energy ratios are imposed on.
struct SynthesisParts {
  std::vector<double> direct;
  std::vector<double> early;
  std::vector<double> late;
  std::size_t direct_toa = 0;
  std::size_t mixing_point = 0;
  Segments segments;
};

/// Direct path, early reflections and faded tail for `rep`. The direct
/// sound's reference sample (the excitation centre) sits at
/// (len(excitation) - 1) / 2, and the mixing point 24 ms after it.
SynthesisParts synthesize_parts(const LowDimRep& rep, std::span<const double> excitation,
                                const SynthesisConfig& cfg);

struct MixGains {
  double early = 0.0;
  double late = 0.0;
};

/// Gains for the early and late parts such that the mixed signal's segment
/// energies satisfy direct/early = eta1 and direct/tail = eta2. Starts from
/// the closed-form ratio of component energies and polishes with Newton's
/// method on the mixed signal. Without an early part only eta2 is imposed.
MixGains solve_mix_gains(const SynthesisParts& parts, double eta1, double eta2);

/// Mixes the parts with solve_mix_gains(); taps are rounded to float precision.
AirSignal assemble(const LowDimRep& rep, std::span<const double> excitation,
                   const SynthesisConfig& cfg);

/// assemble() with an excitation drawn uniformly from `bank` (seeded by cfg.seed).
AirSignal decode(const LowDimRep& rep, const ExcitationBank& bank, const SynthesisConfig& cfg);

/// Index of the bank entry decode() uses for `seed`.
std::size_t pick_excitation(const ExcitationBank& bank, std::uint64_t seed);

}  // namespace airgan

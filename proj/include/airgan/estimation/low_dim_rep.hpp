#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace airgan {

/// Maximum number of early reflections held by the encoding (D_max).
inline constexpr std::size_t kMaxReflections = 78;
/// IIR numerator coefficients b_0..b_P (P = 5) and denominator a_1..a_R (R = 5).
inline constexpr std::size_t kNumeratorLength = 6;
inline constexpr std::size_t kDenominatorLength = 5;
/// 3 scalars + a + b + zero-padded TOA block + zero-padded scale block.
inline constexpr std::size_t kRepLength =
    3 + kDenominatorLength + kNumeratorLength + 2 * kMaxReflections;
static_assert(kRepLength == 170);

/// Early-reflection window after the direct path, in seconds.
inline constexpr double kEarlyWindowSeconds = 0.024;

namespace layout {
inline constexpr std::size_t kT60 = 0;
inline constexpr std::size_t kEta1 = 1;
inline constexpr std::size_t kEta2 = 2;
inline constexpr std::size_t kDenominator = 3;
inline constexpr std::size_t kNumerator = kDenominator + kDenominatorLength;  // 8
inline constexpr std::size_t kToas = kNumerator + kNumeratorLength;           // 14
inline constexpr std::size_t kScales = kToas + kMaxReflections;               // 92
}  // namespace layout

using Numerator = std::array<double, kNumeratorLength>;
using Denominator = std::array<double, kDenominatorLength>;

/// Reverberant-tail description: decay time plus the IIR colouring filter.
struct TailModel {
  double t60 = 0.5;
  Numerator b{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  Denominator a{};
};

/// Fixed-length encoding of one AIR:
///   [T60, eta1, eta2, a_1..a_5, b_0..b_5, 0..0, kappa_1..kappa_D, 0..0, beta_1..beta_D]
/// TOAs are in samples relative to the direct path. The reflection count D
/// is implied by the number of trailing non-zero TOA entries.
class LowDimRep {
 public:
  LowDimRep() = default;

  /// Wraps a raw vector without validation (e.g. a generator output).
  static LowDimRep from_values(std::span<const double> values);

  /// Builds a vector in the canonical layout. Throws PreconditionError if
  /// the TOA and scale lists differ in size or exceed kMaxReflections.
  static LowDimRep compose(double t60, double eta1, double eta2, const Denominator& a,
                           const Numerator& b, std::span<const double> toas,
                           std::span<const double> scales);

  std::span<const double, kRepLength> values() const noexcept { return values_; }
  std::span<double, kRepLength> mutable_values() noexcept { return values_; }

  double t60() const noexcept { return values_[layout::kT60]; }
  double eta1() const noexcept { return values_[layout::kEta1]; }
  double eta2() const noexcept { return values_[layout::kEta2]; }
  Denominator a() const noexcept;
  Numerator b() const noexcept;
  TailModel tail() const noexcept { return {t60(), b(), a()}; }

  /// Number of trailing non-zero entries of the TOA block.
  std::size_t reflection_count() const noexcept;
  std::vector<double> toas() const;
  std::vector<double> scales() const;

  /// Returns a copy with the denominator replaced.
  LowDimRep with_denominator(const Denominator& a) const;

  /// Human-readable list of violated invariants; empty when valid. TOAs
  /// must stay inside the early window for `sample_rate`, T60 within
  /// (0, 10] s and the denominator poles inside the stable radius.
  std::vector<std::string> violations(int sample_rate = 16000) const;
  bool valid(int sample_rate = 16000) const { return violations(sample_rate).empty(); }

  /// One CSV row of 170 values printed with round-trip precision.
  std::string to_csv_row() const;
  static LowDimRep from_csv_row(std::string_view row);

  friend bool operator==(const LowDimRep&, const LowDimRep&) = default;

 private:
  std::array<double, kRepLength> values_{};
};

}  // namespace airgan

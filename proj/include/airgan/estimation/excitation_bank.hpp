#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "airgan/core/air_signal.hpp"

namespace airgan {

/// Fraction of window variance the bank's principal components must explain.
inline constexpr double kBankVarianceFraction = 0.95;

/// Unit-peak excitation pulses reconstructed from measured direct-path windows.
struct ExcitationBank {
  std::vector<std::vector<double>> excitations;
  std::size_t window_len = 0;
  std::size_t n_components = 0;

  bool empty() const noexcept { return excitations.empty(); }

  /// Binary file: int32 count, window_len, n_components, then
  /// count x window_len float32 values (all little-endian).
  void write(const std::filesystem::path& path) const;
  static ExcitationBank read(const std::filesystem::path& path);
};

/// Odd direct-path window length: 2 * round(0.5 ms * fs) + 1.
std::size_t direct_window_length(int sample_rate);

/// `len` samples centred on the fractional position `center`, band-limited
/// interpolated from `air`.
std::vector<double> extract_window(const AirSignal& air, double center, std::size_t len);

/// PCA over every AIR's direct-path window; each bank entry is that AIR's
/// reconstruction from the kept components, scaled to unit peak magnitude
/// with a positive centre sample. Requires at least two AIRs.
ExcitationBank build_excitation_bank(std::span<const AirSignal> airs);
ExcitationBank build_excitation_bank(std::span<const AirSignal> airs, std::size_t window_len);

}  // namespace airgan

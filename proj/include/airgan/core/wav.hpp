#pragma once

#include <filesystem>

#include "airgan/core/air_signal.hpp"
#include "airgan/core/error.hpp"

namespace airgan {

enum class WavErrorKind { kUnreadable, kMalformed, kMultiChannel, kUnsupportedEncoding, kUnwritable };

class WavError : public Error {
 public:
  WavError(WavErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  WavErrorKind kind() const noexcept { return kind_; }

 private:
  WavErrorKind kind_;
};

/// Reads a mono RIFF/WAVE file holding PCM16 or IEEE float32 samples.
/// PCM16 samples are divided by 32768.
AirSignal load_air(const std::filesystem::path& path);

/// Writes a mono IEEE float32 WAV. Taps are rounded to float, so the
/// round-trip is exact for any float-representable signal (everything
/// loaded from disk and everything the decoder produces).
void save_air(const AirSignal& air, const std::filesystem::path& path);

/// Writes a mono PCM16 WAV (clipped to [-1, 1)). Used for fixtures.
void save_air_pcm16(const AirSignal& air, const std::filesystem::path& path);

}  // namespace airgan

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace airgan {

/// Dataset-wide sample rate (Hz) and padded length (2.1 s) of every AIR.
inline constexpr int kDatasetSampleRate = 16000;
inline constexpr std::size_t kDatasetLength = 33600;

/// A sampled acoustic impulse response. Immutable once constructed.
class AirSignal {
 public:
  /// Throws PreconditionError if taps is empty, any tap is non-finite, or
  /// sample_rate is not positive.
  AirSignal(std::vector<double> taps, int sample_rate,
            std::optional<std::string> room_label = std::nullopt,
            std::optional<std::string> source_id = std::nullopt);

  std::span<const double> taps() const noexcept { return taps_; }
  std::size_t size() const noexcept { return taps_.size(); }
  int sample_rate() const noexcept { return sample_rate_; }
  const std::optional<std::string>& room_label() const noexcept { return room_label_; }
  const std::optional<std::string>& source_id() const noexcept { return source_id_; }

  double operator[](std::size_t i) const noexcept { return taps_[i]; }

  /// Copy with a different label / id; taps are shared by value.
  AirSignal with_labels(std::optional<std::string> room_label,
                        std::optional<std::string> source_id) const;

 private:
  std::vector<double> taps_;
  int sample_rate_;
  std::optional<std::string> room_label_;
  std::optional<std::string> source_id_;
};

/// Appends zeros so the result has exactly `length` taps.
AirSignal pad_to(const AirSignal& air, std::size_t length);

/// Windowed-sinc downsampling to `target_rate`. Upsampling is rejected.
/// Output length is round(len * target / source).
AirSignal resample(const AirSignal& air, int target_rate);

}  // namespace airgan

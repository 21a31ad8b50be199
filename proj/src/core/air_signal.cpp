#include "airgan/core/air_signal.hpp"

#include <cmath>

#include "airgan/core/error.hpp"

namespace airgan {

AirSignal::AirSignal(std::vector<double> taps, int sample_rate,
                     std::optional<std::string> room_label,
                     std::optional<std::string> source_id)
    : taps_(std::move(taps)),
      sample_rate_(sample_rate),
      room_label_(std::move(room_label)),
      source_id_(std::move(source_id)) {
  if (taps_.empty()) throw PreconditionError("AirSignal: empty taps");
  if (sample_rate_ <= 0) throw PreconditionError("AirSignal: sample rate must be positive");
  for (double v : taps_) {
    if (!std::isfinite(v)) throw PreconditionError("AirSignal: non-finite tap");
  }
}

AirSignal AirSignal::with_labels(std::optional<std::string> room_label,
                                 std::optional<std::string> source_id) const {
  return AirSignal(taps_, sample_rate_, std::move(room_label), std::move(source_id));
}

AirSignal pad_to(const AirSignal& air, std::size_t length) {
  if (length < air.size()) {
    throw PreconditionError("pad_to: target length " + std::to_string(length) +
                            " is shorter than signal length " + std::to_string(air.size()));
  }
  std::vector<double> taps(air.taps().begin(), air.taps().end());
  taps.resize(length, 0.0);
  return AirSignal(std::move(taps), air.sample_rate(), air.room_label(), air.source_id());
}

}  // namespace airgan

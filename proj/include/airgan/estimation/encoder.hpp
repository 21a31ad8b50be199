#pragma once

#include <string>
#include <vector>

#include "airgan/core/air_signal.hpp"
#include "airgan/estimation/drr.hpp"
#include "airgan/estimation/low_dim_rep.hpp"
#include "airgan/estimation/prony.hpp"
#include "airgan/estimation/reflections.hpp"

namespace airgan {

struct Encoding {
  LowDimRep rep;
  /// The AIR's own direct-path window, scaled so its centre sample is 1.
  std::vector<double> excitation;
  EarlyReflectionSet reflections;  ///< absolute TOAs, raw scales
  TailFilter tail;
  DrrMeasurement drr;
  std::size_t mixing_point = 0;
};

/// Full analysis of one 16 kHz AIR into the 170-value encoding. Errors from
/// any stage are rethrown as StageError naming the stage.
Encoding encode(const AirSignal& air, std::size_t bank_window);
Encoding encode(const AirSignal& air);

}  // namespace airgan

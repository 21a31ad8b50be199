#include "airgan/estimation/encoder.hpp"

#include <cmath>

#include "airgan/core/error.hpp"
#include "airgan/estimation/direct_path.hpp"
#include "airgan/estimation/excitation_bank.hpp"
#include "airgan/estimation/reverb_time.hpp"

namespace airgan {

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

Encoding encode(const AirSignal& air) {
  return encode(air, direct_window_length(air.sample_rate()));
}

Encoding encode(const AirSignal& air, std::size_t bank_window) {
  if (air.sample_rate() != kDatasetSampleRate) {
    throw PreconditionError("encode: AIR is at " + std::to_string(air.sample_rate()) +
                            " Hz; resample first to " + std::to_string(kDatasetSampleRate) + " Hz");
  }
  if (bank_window == 0) throw PreconditionError("encode: empty excitation window");

  Encoding out;
  const auto direct = stage("direct path", [&] { return detect_direct_path(air); });

  // The AIR's own excitation: taps centred on the integer direct-path peak,
  // normalised so the centre sample is 1.
  const auto anchor = static_cast<long>(std::llround(direct.toa));
  const auto half = static_cast<long>((bank_window - 1) / 2);
  out.excitation.assign(bank_window, 0.0);
  for (long i = 0; i < static_cast<long>(bank_window); ++i) {
    const long idx = anchor - half + i;
    if (idx >= 0 && idx < static_cast<long>(air.size())) {
      out.excitation[static_cast<std::size_t>(i)] = air[static_cast<std::size_t>(idx)];
    }
  }
  const double centre = out.excitation[static_cast<std::size_t>(half)];
  if (centre == 0.0) throw StageError("excitation", "zero direct-path sample");
  for (double& v : out.excitation) v /= centre;

  out.reflections = stage("reflections", [&] {
    return estimate_reflections(air, out.excitation, kMaxReflections);
  });
  out.mixing_point = mixing_point(direct.toa, air.sample_rate());
  if (out.mixing_point >= air.size()) throw StageError("mixing point", "beyond the end of the AIR");
  const double t60 = stage("reverberation time", [&] {
    return estimate_t60(air.taps().subspan(out.mixing_point), air.sample_rate());
  });
  out.tail = stage("tail filter", [&] { return estimate_tail_iir(air, out.mixing_point); });
  out.drr = stage("energy ratios", [&] { return measure_drr(air, out.reflections, out.mixing_point); });

  const auto& refl = out.reflections;
  if (refl.beta_d == 0.0) throw StageError("reflections", "zero direct-path scale");
  std::vector<double> toas, scales;
  for (std::size_t i = 0; i < refl.size(); ++i) {
    toas.push_back(refl.kappa[i] - refl.k_d);
    scales.push_back(refl.beta[i] / refl.beta_d);
  }
  out.rep = LowDimRep::compose(t60, out.drr.eta1, out.drr.eta2, out.tail.a, out.tail.b, toas, scales);
  return out;
}

}  // namespace airgan

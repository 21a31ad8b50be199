#include "airgan/estimation/low_dim_rep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "airgan/core/error.hpp"
#include "airgan/estimation/poles.hpp"
#include "airgan/estimation/reverb_time.hpp"

namespace airgan {

LowDimRep LowDimRep::from_values(std::span<const double> values) {
  if (values.size() != kRepLength) {
    throw PreconditionError("LowDimRep: expected " + std::to_string(kRepLength) + " values, got " +
                            std::to_string(values.size()));
  }
  LowDimRep rep;
  std::copy(values.begin(), values.end(), rep.values_.begin());
  return rep;
}

LowDimRep LowDimRep::compose(double t60, double eta1, double eta2, const Denominator& a,
                             const Numerator& b, std::span<const double> toas,
                             std::span<const double> scales) {
  if (toas.size() != scales.size()) {
    throw PreconditionError("LowDimRep: TOA and scale counts differ");
  }
  if (toas.size() > kMaxReflections) {
    throw PreconditionError("LowDimRep: " + std::to_string(toas.size()) +
                            " reflections exceed the maximum of " +
                            std::to_string(kMaxReflections));
  }
  LowDimRep rep;
  auto& v = rep.values_;
  v[layout::kT60] = t60;
  v[layout::kEta1] = eta1;
  v[layout::kEta2] = eta2;
  std::copy(a.begin(), a.end(), v.begin() + layout::kDenominator);
  std::copy(b.begin(), b.end(), v.begin() + layout::kNumerator);
  const std::size_t pad = kMaxReflections - toas.size();
  std::copy(toas.begin(), toas.end(), v.begin() + static_cast<long>(layout::kToas + pad));
  std::copy(scales.begin(), scales.end(), v.begin() + static_cast<long>(layout::kScales + pad));
  return rep;
}

Denominator LowDimRep::a() const noexcept {
  Denominator a;
  std::copy_n(values_.begin() + layout::kDenominator, a.size(), a.begin());
  return a;
}

Numerator LowDimRep::b() const noexcept {
  Numerator b;
  std::copy_n(values_.begin() + layout::kNumerator, b.size(), b.begin());
  return b;
}

std::size_t LowDimRep::reflection_count() const noexcept {
  std::size_t d = 0;
  while (d < kMaxReflections && values_[layout::kToas + kMaxReflections - 1 - d] != 0.0) ++d;
  return d;
}

std::vector<double> LowDimRep::toas() const {
  const std::size_t d = reflection_count();
  const auto first = values_.begin() + static_cast<long>(layout::kToas + kMaxReflections - d);
  return {first, first + static_cast<long>(d)};
}

std::vector<double> LowDimRep::scales() const {
  const std::size_t d = reflection_count();
  const auto first = values_.begin() + static_cast<long>(layout::kScales + kMaxReflections - d);
  return {first, first + static_cast<long>(d)};
}

LowDimRep LowDimRep::with_denominator(const Denominator& a) const {
  LowDimRep out = *this;
  std::copy(a.begin(), a.end(), out.values_.begin() + layout::kDenominator);
  return out;
}

std::vector<std::string> LowDimRep::violations(int sample_rate) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kRepLength; ++i) {
    if (!std::isfinite(values_[i])) {
      out.push_back("non-finite value at index " + std::to_string(i));
      return out;
    }
  }
  if (!(t60() > 0.0)) out.emplace_back("T60 must be positive");
  if (t60() > kMaxT60) out.emplace_back("T60 exceeds the 10 s sanity bound");
  if (!(eta1() > 0.0)) out.emplace_back("eta1 must be positive");
  if (!(eta2() > 0.0)) out.emplace_back("eta2 must be positive");

  const std::size_t d = reflection_count();
  const std::size_t pad = kMaxReflections - d;
  for (std::size_t i = 0; i < pad; ++i) {
    if (values_[layout::kToas + i] != 0.0) {
      out.emplace_back("TOA block padding is not all zeros");
      break;
    }
  }
  for (std::size_t i = 0; i < pad; ++i) {
    if (values_[layout::kScales + i] != 0.0) {
      out.emplace_back("scale block padding is not all zeros");
      break;
    }
  }
  const double max_toa = kEarlyWindowSeconds * sample_rate;
  const auto toa = toas();
  for (std::size_t i = 0; i < toa.size(); ++i) {
    if (!(toa[i] > 0.0) || toa[i] > max_toa) {
      out.push_back("TOA " + std::to_string(toa[i]) + " outside (0, " + std::to_string(max_toa) + "]");
      break;
    }
    if (i > 0 && !(toa[i] > toa[i - 1])) {
      out.emplace_back("TOAs are not strictly increasing");
      break;
    }
  }
  const auto den = a();
  if (max_pole_radius(den) > kStablePoleRadius) {
    out.emplace_back("denominator has poles outside the unit circle");
  }
  return out;
}

std::string LowDimRep::to_csv_row() const {
  std::string row;
  row.reserve(kRepLength * 24);
  char buf[32];
  for (std::size_t i = 0; i < kRepLength; ++i) {
    if (i > 0) row += ',';
    const auto res = std::to_chars(buf, buf + sizeof(buf), values_[i]);
    row.append(buf, res.ptr);
  }
  return row;
}

LowDimRep LowDimRep::from_csv_row(std::string_view row) {
  while (!row.empty() && (row.back() == '\n' || row.back() == '\r')) row.remove_suffix(1);
  std::vector<double> values;
  values.reserve(kRepLength);
  std::size_t pos = 0;
  while (pos <= row.size()) {
    const std::size_t comma = std::min(row.find(',', pos), row.size());
    auto field = row.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
      throw PreconditionError("LowDimRep: cannot parse '" + std::string(field) + "'");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  return from_values(values);
}

}  // namespace airgan

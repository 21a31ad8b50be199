#include "airgan/gan/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "airgan/core/error.hpp"
#include "airgan/estimation/poles.hpp"
#include "json.hpp"

namespace airgan::gan {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

HistogramPair shared_histogram(std::span<const double> real, std::span<const double> generated,
                               std::size_t bins, double lo, double hi) {
  if (bins == 0) throw PreconditionError("shared_histogram: zero bins");
  if (!(hi > lo)) {
    lo -= 0.5;
    hi = lo + 1.0;
  }
  HistogramPair h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  }
  auto fill = [&](std::span<const double> xs, std::vector<std::size_t>& counts) {
    counts.assign(bins, 0);
    for (double x : xs) {
      if (!std::isfinite(x) || x < lo || x > hi) continue;
      auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
      ++counts[std::min(k, bins - 1)];
    }
  };
  fill(real, h.real);
  fill(generated, h.generated);
  return h;
}

HistogramPair shared_histogram(std::span<const double> real, std::span<const double> generated,
                               std::size_t bins) {
  double lo = INFINITY, hi = -INFINITY;
  for (auto xs : {real, generated}) {
    for (double x : xs) {
      if (!std::isfinite(x)) continue;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  return shared_histogram(real, generated, bins, lo, hi);
}

std::vector<double> zero_frequencies(const LowDimRep& rep, int sample_rate) {
  const auto b = rep.b();
  std::vector<double> hz;
  for (const auto& z : polynomial_roots(b)) {
    if (z.imag() < 0.0 || std::abs(z) < 1e-12) continue;
    hz.push_back(std::arg(z) * sample_rate / (2.0 * std::numbers::pi));
  }
  return hz;
}

const ParameterReport& DistributionReport::get(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw PreconditionError("distribution report has no parameter '" + name + "'");
}

void DistributionReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out.precision(10);
  out << "parameter,bin_lo,bin_hi,real,generated\n";
  for (const auto& p : parameters) {
    const auto& h = p.histogram;
    for (std::size_t k = 0; k < h.real.size(); ++k) {
      out << p.name << ',' << h.edges[k] << ',' << h.edges[k + 1] << ',' << h.real[k] << ','
          << h.generated[k] << '\n';
    }
  }
}

void DistributionReport::write_json(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["real_count"] = real_count;
  j["generated_count"] = generated_count;
  for (const auto& p : parameters) {
    j["parameters"][p.name] = {{"ks", p.ks},
                               {"real_mean", p.real_mean},
                               {"generated_mean", p.generated_mean},
                               {"edges", p.histogram.edges},
                               {"real", p.histogram.real},
                               {"generated", p.histogram.generated}};
  }
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

DistributionReport evaluate_distribution(std::span<const LowDimRep> real,
                                         std::span<const LowDimRep> generated, int sample_rate,
                                         std::size_t bins) {
  if (real.empty() || generated.empty()) {
    throw PreconditionError("evaluate_distribution: both sets must be non-empty");
  }
  DistributionReport report;
  report.real_count = real.size();
  report.generated_count = generated.size();

  auto mean = [](const std::vector<double>& x) {
    return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  };
  auto add = [&](std::string name, std::vector<double> r, std::vector<double> g, bool hz) {
    ParameterReport p;
    p.name = std::move(name);
    p.ks = (r.empty() || g.empty()) ? (r.empty() && g.empty() ? 0.0 : 1.0) : ks_statistic(r, g);
    p.real_mean = mean(r);
    p.generated_mean = mean(g);
    p.histogram = hz ? shared_histogram(r, g, bins, 0.0, sample_rate / 2.0) : shared_histogram(r, g, bins);
    report.parameters.push_back(std::move(p));
  };

  const std::pair<const char*, std::size_t> scalars[] = {
      {"t60", layout::kT60}, {"eta1", layout::kEta1}, {"eta2", layout::kEta2}};
  for (const auto& [name, index] : scalars) {
    std::vector<double> r, g;
    for (const auto& x : real) r.push_back(x.values()[index]);
    for (const auto& x : generated) g.push_back(x.values()[index]);
    add(name, std::move(r), std::move(g), false);
  }
  std::vector<double> rz, gz;
  for (const auto& x : real) {
    for (double f : zero_frequencies(x, sample_rate)) rz.push_back(f);
  }
  for (const auto& x : generated) {
    for (double f : zero_frequencies(x, sample_rate)) gz.push_back(f);
  }
  add("zero_hz", std::move(rz), std::move(gz), true);
  return report;
}

}  // namespace airgan::gan

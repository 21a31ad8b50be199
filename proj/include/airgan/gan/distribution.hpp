#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "airgan/estimation/low_dim_rep.hpp"

namespace airgan::gan {

/// Two-sample Kolmogorov-Smirnov statistic (sup distance of the ECDFs).
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Counts of both sample sets over one shared set of equal-width bins.
struct HistogramPair {
  std::vector<double> edges;  ///< bins + 1 edges
  std::vector<std::size_t> real;
  std::vector<std::size_t> generated;
};

HistogramPair shared_histogram(std::span<const double> real, std::span<const double> generated,
                               std::size_t bins);
HistogramPair shared_histogram(std::span<const double> real, std::span<const double> generated,
                               std::size_t bins, double lo, double hi);

/// Frequencies (Hz) of the numerator zeros with non-negative imaginary part.
std::vector<double> zero_frequencies(const LowDimRep& rep, int sample_rate);

struct ParameterReport {
  std::string name;
  double ks = 0.0;
  double real_mean = 0.0;
  double generated_mean = 0.0;
  HistogramPair histogram;
};

struct DistributionReport {
  std::vector<ParameterReport> parameters;  ///< t60, eta1, eta2, zero_hz
  std::size_t real_count = 0;
  std::size_t generated_count = 0;

  const ParameterReport& get(const std::string& name) const;
  /// Long-format CSV: parameter,bin_lo,bin_hi,real,generated.
  void write_csv(const std::filesystem::path& path) const;
  void write_json(const std::filesystem::path& path) const;
};

DistributionReport evaluate_distribution(std::span<const LowDimRep> real,
                                         std::span<const LowDimRep> generated,
                                         int sample_rate = 16000, std::size_t bins = 20);

}  // namespace airgan::gan

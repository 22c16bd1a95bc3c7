// Builders shared by the test binaries.
#pragma once

#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fxclust/hcluster.hpp"
#include "fxclust/histogram.hpp"
#include "fxclust/ingest.hpp"
#include "fxclust/metrics.hpp"

namespace helpers {

inline std::vector<std::string> labels_n(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("A" + std::to_string(i));
  return out;
}

inline fxclust::DistanceMatrix matrix_of(
    const std::vector<std::vector<double>>& d,
    fxclust::Metric metric = fxclust::Metric::js_sqrt) {
  fxclust::DistanceMatrix dm(labels_n(d.size()), metric);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) dm.set(i, j, d[i][j]);
  }
  return dm;
}

// Random sparse histogram on the shared unit-width grid: up to max_bins
// occupied bins in [-10, 10], probabilities normalized from uniform draws.
inline fxclust::Histogram random_histogram(std::mt19937_64& rng,
                                           int max_bins = 12,
                                           double bin_width = 1.0) {
  std::uniform_int_distribution<int> nbins(1, max_bins);
  std::uniform_int_distribution<std::int64_t> where(-10, 10);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  std::map<std::int64_t, double> bins;
  int k = nbins(rng);
  for (int i = 0; i < k; ++i) bins[where(rng)] += mass(rng);
  double total = 0.0;
  for (auto& [bin, p] : bins) total += p;
  std::vector<std::pair<std::int64_t, double>> out;
  for (auto& [bin, p] : bins) out.emplace_back(bin, p / total);
  return fxclust::Histogram::from_probabilities(out, bin_width);
}

inline fxclust::RateSeries series_of(const std::string& code,
                                     const std::vector<int>& serial_days,
                                     const std::vector<double>& prices) {
  fxclust::RateSeries s;
  s.meta.code = code;
  for (int d : serial_days) s.dates.push_back(fxclust::Date(d));
  s.prices = prices;
  return s;
}

inline std::vector<fxclust::RateSeries> parse_rates_text(
    const std::string& text) {
  std::istringstream in(text);
  return fxclust::parse_rates(in, {}, "test");
}

}  // namespace helpers

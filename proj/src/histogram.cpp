#include "fxclust/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fxclust/error.hpp"

namespace fxclust {

Histogram::Histogram(const std::vector<double>& values, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw Error(ErrorCode::NonPositiveBinWidth,
                "bin width " + std::to_string(bin_width));
  }
  if (values.empty()) {
    throw Error(ErrorCode::SeriesTooShort, "histogram of an empty sample");
  }
  bin_width_ = bin_width;
  std::map<std::int64_t, std::size_t> counts;
  for (double x : values) {
    counts[std::int64_t(std::floor(x / bin_width))] += 1;
  }
  const double n = double(values.size());
  bins_.reserve(counts.size());
  for (auto& [bin, count] : counts) {
    bins_.emplace_back(bin, double(count) / n);
  }
}

Histogram Histogram::from_probabilities(
    std::vector<std::pair<std::int64_t, double>> bins, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw Error(ErrorCode::NonPositiveBinWidth,
                "bin width " + std::to_string(bin_width));
  }
  std::sort(bins.begin(), bins.end());
  double total = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i > 0 && bins[i].first == bins[i - 1].first) {
      throw Error(ErrorCode::MalformedRow, "duplicate bin index");
    }
    if (bins[i].second < 0.0) {
      throw Error(ErrorCode::MalformedRow, "negative probability");
    }
    total += bins[i].second;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::MalformedRow,
                "probabilities sum to " + std::to_string(total));
  }
  std::erase_if(bins, [](const auto& b) { return b.second == 0.0; });
  if (bins.empty()) {
    throw Error(ErrorCode::MalformedRow, "histogram with no mass");
  }
  Histogram h;
  h.bin_width_ = bin_width;
  h.bins_ = std::move(bins);
  return h;
}

double Histogram::probability(std::int64_t bin) const {
  auto it = std::lower_bound(
      bins_.begin(), bins_.end(), bin,
      [](const std::pair<std::int64_t, double>& b, std::int64_t key) {
        return b.first < key;
      });
  if (it != bins_.end() && it->first == bin) return it->second;
  return 0.0;
}

}  // namespace fxclust

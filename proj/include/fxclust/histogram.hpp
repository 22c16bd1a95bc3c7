#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace fxclust {

// Discrete probability distribution over fixed-width bins on a grid anchored
// at 0: value x lands in bin floor(x / bin_width). Only occupied bins are
// stored, sorted by bin index, so extreme tails cost nothing. Probabilities
// sum to 1.
class Histogram {
 public:
  Histogram(const std::vector<double>& values, double bin_width);

  // Pre-normalized probabilities on an explicit grid (test and fixture use).
  static Histogram from_probabilities(
      std::vector<std::pair<std::int64_t, double>> bins, double bin_width);

  double bin_width() const { return bin_width_; }
  const std::vector<std::pair<std::int64_t, double>>& bins() const {
    return bins_;
  }
  std::int64_t first_bin() const { return bins_.front().first; }
  std::int64_t last_bin() const { return bins_.back().first; }

  // 0 for unoccupied bins.
  double probability(std::int64_t bin) const;

  bool same_grid(const Histogram& other) const {
    return bin_width_ == other.bin_width_;
  }

 private:
  Histogram() = default;
  double bin_width_ = 0.0;
  std::vector<std::pair<std::int64_t, double>> bins_;
};

}  // namespace fxclust

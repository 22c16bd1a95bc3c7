#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fxclust/histogram.hpp"
#include "fxclust/returns.hpp"

namespace fxclust {

enum class Metric { js_sqrt, kurtosis_delta, pearson, cophenetic };

const char* to_string(Metric m);
Metric metric_from_string(const std::string& s);

// Symmetric pairwise distance matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<std::string> labels, Metric metric);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  Metric metric() const { return metric_; }

  double at(std::size_t i, std::size_t j) const {
    return values_[i * labels_.size() + j];
  }
  void set(std::size_t i, std::size_t j, double d);

  // Throws InvalidMatrix on NaN, negative entries, nonzero diagonal or
  // asymmetry.
  void validate() const;

  // i > j, rows in order: (1,0), (2,0), (2,1), (3,0), ...
  std::vector<double> lower_triangle() const;

  void write_csv(std::ostream& out) const;
  std::string to_json() const;
  static DistanceMatrix from_json(const std::string& text);
  static DistanceMatrix read_csv(std::istream& in, Metric metric);

 private:
  std::vector<std::string> labels_;
  Metric metric_;
  std::vector<double> values_;
};

// Natural-log KL divergence on a shared grid, convention 0*log(0/q) = 0.
// Throws UndefinedKL when p has mass on a bin where q has none.
double kl_divergence(const Histogram& p, const Histogram& q);

// Always finite, symmetric, in [0, ln 2]. Summed over the union of supports
// in ascending bin order, so js(p,q) == js(q,p) bit for bit.
double js_divergence(const Histogram& p, const Histogram& q);

// sqrt(JS): a true metric, bounded by sqrt(ln 2).
double similarity_distance(const Histogram& p, const Histogram& q);

// |k_i - k_j| / mean(k_i, k_j); both kurtoses must be positive.
double kurtosis_distance(double k_i, double k_j);

// sqrt(2 (1 - C)) with C the Pearson correlation of the two series.
double pearson_distance(const std::vector<double>& r_i,
                        const std::vector<double>& r_j);

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

// Fills all pairs with the chosen metric. js_sqrt builds one histogram per
// series on a shared grid of the given width; kurtosis and pearson operate
// on the normalized returns.
DistanceMatrix distance_matrix(const std::vector<ReturnSeries>& returns,
                               Metric metric, double bin_width = 0.05);

}  // namespace fxclust

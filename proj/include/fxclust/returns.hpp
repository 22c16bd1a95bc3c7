#pragma once

#include <iosfwd>
#include <vector>

#include "fxclust/types.hpp"

namespace fxclust {

// Log returns of one asset together with their normalization.
// normalized[t] = (raw[t] - mean) / loo_sigma[t], where loo_sigma[t] is the
// standard deviation of the raw returns with the contribution of step t
// removed (1/(T-2) normalization). The mean is the plain full-sample mean.
struct ReturnSeries {
  AssetMeta asset;
  std::vector<double> raw;
  double mean = 0.0;
  std::vector<double> loo_sigma;
  std::vector<double> normalized;

  std::size_t size() const { return raw.size(); }
};

struct Moments {
  double variance;
  double skewness;  // m3 / m2^(3/2)
  double kurtosis;  // m4 / m2^2, non-excess: 3 for a normal distribution
};

// element t = ln(prices[t + dt_steps]) - ln(prices[t])
std::vector<double> log_returns(const RateSeries& series, int dt_steps = 1);
std::vector<double> log_returns(const std::vector<double>& prices,
                                int dt_steps = 1);

struct LooVolatility {
  double mean;
  std::vector<double> sigma;
};

// Leave-one-out volatility, computed in O(T) from the identity
// sum_{t' != t}(x_t' - mu)^2 = S - (x_t - mu)^2 with S the full sum.
// Throws DegenerateSeries if any sigma falls below sigma_floor.
LooVolatility loo_volatility(const std::vector<double>& raw,
                             double sigma_floor = 1e-12);

ReturnSeries normalize(const std::vector<double>& raw,
                       double sigma_floor = 1e-12);
ReturnSeries normalize(const RateSeries& series, int dt_steps = 1,
                       double sigma_floor = 1e-12);

// Population moments about the sample mean (divide by T, no Bessel).
Moments moments(const std::vector<double>& values, double var_floor = 1e-12);

// Audit dump: date,raw,sigma,normalized. Dates are the return timestamps,
// i.e. the axis shifted by dt_steps.
void write_returns_csv(const ReturnSeries& rs, const std::vector<Date>& dates,
                       int dt_steps, std::ostream& out);

}  // namespace fxclust

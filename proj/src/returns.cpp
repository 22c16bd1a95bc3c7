#include "fxclust/returns.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fxclust/error.hpp"

namespace fxclust {

std::vector<double> log_returns(const std::vector<double>& prices,
                                int dt_steps) {
  if (dt_steps < 1) {
    throw Error(ErrorCode::ConfigError, "dt_steps must be >= 1");
  }
  if (prices.size() <= std::size_t(dt_steps)) {
    throw Error(ErrorCode::SeriesTooShort,
                "need more than dt_steps=" + std::to_string(dt_steps) +
                    " prices, got " + std::to_string(prices.size()));
  }
  std::vector<double> out(prices.size() - std::size_t(dt_steps));
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = std::log(prices[t + std::size_t(dt_steps)]) - std::log(prices[t]);
  }
  return out;
}

std::vector<double> log_returns(const RateSeries& series, int dt_steps) {
  return log_returns(series.prices, dt_steps);
}

LooVolatility loo_volatility(const std::vector<double>& raw,
                             double sigma_floor) {
  const std::size_t T = raw.size();
  if (T < 3) {
    throw Error(ErrorCode::SeriesTooShort,
                "leave-one-out volatility needs T >= 3, got " +
                    std::to_string(T));
  }
  double mean = 0.0;
  for (double x : raw) mean += x;
  mean /= double(T);

  double total = 0.0;
  for (double x : raw) {
    double d = x - mean;
    total += d * d;
  }

  LooVolatility out;
  out.mean = mean;
  out.sigma.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    double d = raw[t] - mean;
    double rest = total - d * d;
    if (rest < 0.0) rest = 0.0;  // cancellation when one point carries all variance
    double s = std::sqrt(rest / double(T - 2));
    if (s < sigma_floor) {
      throw Error(ErrorCode::DegenerateSeries,
                  "sigma[" + std::to_string(t) + "] = " + std::to_string(s) +
                      " below floor; series is (near-)constant away from t");
    }
    out.sigma[t] = s;
  }
  return out;
}

ReturnSeries normalize(const std::vector<double>& raw, double sigma_floor) {
  LooVolatility v = loo_volatility(raw, sigma_floor);
  ReturnSeries rs;
  rs.raw = raw;
  rs.mean = v.mean;
  rs.loo_sigma = std::move(v.sigma);
  rs.normalized.resize(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) {
    rs.normalized[t] = (raw[t] - rs.mean) / rs.loo_sigma[t];
  }
  return rs;
}

ReturnSeries normalize(const RateSeries& series, int dt_steps,
                       double sigma_floor) {
  ReturnSeries rs = normalize(log_returns(series, dt_steps), sigma_floor);
  rs.asset = series.meta;
  return rs;
}

Moments moments(const std::vector<double>& values, double var_floor) {
  const std::size_t n = values.size();
  if (n < 4) {
    throw Error(ErrorCode::SeriesTooShort,
                "moments need at least 4 values, got " + std::to_string(n));
  }
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= double(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : values) {
    double d = x - mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= double(n);
  m3 /= double(n);
  m4 /= double(n);
  if (m2 < var_floor) {
    throw Error(ErrorCode::DegenerateSeries,
                "variance " + std::to_string(m2) + " below floor");
  }
  Moments m;
  m.variance = m2;
  m.skewness = m3 / (m2 * std::sqrt(m2));
  m.kurtosis = m4 / (m2 * m2);
  return m;
}

void write_returns_csv(const ReturnSeries& rs, const std::vector<Date>& dates,
                       int dt_steps, std::ostream& out) {
  out << "date,raw,sigma,normalized\n";
  char buf[128];
  for (std::size_t t = 0; t < rs.raw.size(); ++t) {
    std::string date = (t + std::size_t(dt_steps) < dates.size())
                           ? dates[t + std::size_t(dt_steps)].to_string()
                           : std::to_string(t);
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g", date.c_str(),
                  rs.raw[t], rs.loo_sigma[t], rs.normalized[t]);
    out << buf << '\n';
  }
}

}  // namespace fxclust

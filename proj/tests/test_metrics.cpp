#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fxclust/error.hpp"
#include "fxclust/metrics.hpp"
#include "fxclust/returns.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fxclust;
using helpers::random_histogram;
using oracles::thrown_code;

namespace {

Histogram two_bins(double p0, double p1) {
  return Histogram::from_probabilities({{0, p0}, {1, p1}}, 1.0);
}

ReturnSeries series_from_raw(const std::string& code,
                             const std::vector<double>& raw) {
  ReturnSeries rs = normalize(raw);
  rs.asset.code = code;
  return rs;
}

}  // namespace

TEST_CASE("histogram bins by floor(x / width)") {
  Histogram h({0.01, 0.02, 0.07}, 0.05);
  REQUIRE(h.bins().size() == 2);
  CHECK(h.bins()[0].first == 0);
  CHECK(h.bins()[0].second == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(h.bins()[1].first == 1);
  CHECK(h.bins()[1].second == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(h.probability(2) == 0.0);

  Histogram neg({-0.01}, 0.05);
  CHECK(neg.first_bin() == -1);

  CHECK(thrown_code([] { Histogram h2({1.0}, 0.0); }) ==
        ErrorCode::NonPositiveBinWidth);
  CHECK(thrown_code([] { Histogram h3({}, 0.05); }) ==
        ErrorCode::SeriesTooShort);
}

TEST_CASE("histogram probabilities sum to one") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    auto values = oracles::random_sample(200, rng);
    Histogram h(values, 0.05);
    double total = 0.0;
    for (auto& [bin, p] : h.bins()) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("histogram of a million normal draws matches the Gaussian cdf") {
  std::mt19937_64 rng(32);
  auto values = oracles::random_sample(1000000, rng);
  Histogram h(values, 0.05);
  CHECK(h.probability(0) ==
        doctest::Approx(oracles::kNormalBin0Mass).epsilon(0.02));
}

TEST_CASE("kl divergence hand values") {
  CHECK(kl_divergence(two_bins(0.5, 0.5), two_bins(0.5, 0.5)) == 0.0);
  CHECK(kl_divergence(two_bins(0.5, 0.5), two_bins(0.25, 0.75)) ==
        doctest::Approx(oracles::kKlHalfHalf).epsilon(1e-9));
  CHECK(thrown_code([] {
          kl_divergence(
              Histogram::from_probabilities({{0, 1.0}}, 1.0),
              Histogram::from_probabilities({{1, 1.0}}, 1.0));
        }) == ErrorCode::UndefinedKL);
  CHECK(thrown_code([] {
          kl_divergence(Histogram({1.0}, 0.05), Histogram({1.0}, 0.1));
        }) == ErrorCode::GridMismatch);
}

TEST_CASE("kl divergence is non-negative and zero only at equality") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 500; ++rep) {
    Histogram p = random_histogram(rng);
    Histogram q = random_histogram(rng);
    try {
      double kl = kl_divergence(p, q);
      CHECK(kl >= 0.0);
      if (kl == 0.0) {
        REQUIRE(p.bins().size() == q.bins().size());
        for (std::size_t i = 0; i < p.bins().size(); ++i) {
          CHECK(p.bins()[i].first == q.bins()[i].first);
          CHECK(p.bins()[i].second ==
                doctest::Approx(q.bins()[i].second).epsilon(1e-12));
        }
      }
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UndefinedKL);
    }
  }
}

TEST_CASE("js divergence hand values and bounds") {
  Histogram point = Histogram::from_probabilities({{0, 1.0}}, 1.0);
  Histogram uniform = two_bins(0.5, 0.5);
  CHECK(js_divergence(uniform, uniform) == 0.0);
  CHECK(js_divergence(point, uniform) ==
        doctest::Approx(oracles::kJsPointVsUniform).epsilon(1e-9));
  CHECK(similarity_distance(point, uniform) ==
        doctest::Approx(oracles::kDPointVsUniform).epsilon(1e-9));

  Histogram far = Histogram::from_probabilities({{5, 0.5}, {7, 0.5}}, 1.0);
  CHECK(std::abs(js_divergence(point, far) - oracles::kLn2) < 1e-12);
  CHECK(std::abs(similarity_distance(point, far) - oracles::kSqrtLn2) < 1e-12);
}

TEST_CASE("js divergence is exactly symmetric and bounded") {
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 10000; ++rep) {
    Histogram p = random_histogram(rng);
    Histogram q = random_histogram(rng);
    double ab = js_divergence(p, q);
    double ba = js_divergence(q, p);
    CHECK(ab == ba);  // bit-for-bit
    CHECK(ab >= 0.0);
    CHECK(ab <= oracles::kLn2 + 1e-12);
  }
}

TEST_CASE("sqrt-js satisfies the triangle inequality") {
  std::mt19937_64 rng(35);
  for (int rep = 0; rep < 10000; ++rep) {
    Histogram p = random_histogram(rng);
    Histogram q = random_histogram(rng);
    Histogram s = random_histogram(rng);
    double pq = similarity_distance(p, q);
    double qs = similarity_distance(q, s);
    double ps = similarity_distance(p, s);
    CHECK(ps <= pq + qs + 1e-12);
  }
}

TEST_CASE("kurtosis distance") {
  CHECK(kurtosis_distance(3.0, 3.0) == 0.0);
  CHECK(kurtosis_distance(3.0, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double k : {0.5, 1.0, 42.0}) {
    CHECK(kurtosis_distance(k, 3.0 * k) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(kurtosis_distance(5.0, 3.0) == kurtosis_distance(3.0, 5.0));
  CHECK(thrown_code([] { kurtosis_distance(-1.0, 2.0); }) ==
        ErrorCode::NonPositiveKurtosis);
}

TEST_CASE("pearson distance endpoints and noise") {
  std::mt19937_64 rng(36);
  auto x = oracles::random_sample(100, rng);
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  CHECK(pearson_distance(x, x) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pearson_distance(x, neg) == doctest::Approx(2.0).epsilon(1e-9));

  auto a = oracles::random_sample(10000, rng);
  auto b = oracles::random_sample(10000, rng);
  CHECK(std::abs(pearson_distance(a, b) - std::sqrt(2.0)) < 0.02);
  CHECK(pearson_correlation(a, b) ==
        doctest::Approx(oracles::plain_pearson(a, b)).epsilon(1e-12));
}

TEST_CASE("pearson distance contracts") {
  CHECK(thrown_code([] {
          pearson_distance({1.0, 2.0, 3.0}, {1.0, 2.0});
        }) == ErrorCode::LengthMismatch);
  CHECK(thrown_code([] {
          pearson_distance({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0});
        }) == ErrorCode::DegenerateSeries);
  CHECK(thrown_code([] { pearson_distance({1.0, 2.0}, {1.0, 2.0}); }) ==
        ErrorCode::SeriesTooShort);
}

TEST_CASE("pearson distance ignores affine maps of either series") {
  std::mt19937_64 rng(37);
  auto x = oracles::random_sample(300, rng);
  auto y = oracles::random_sample(300, rng);
  double base = pearson_distance(x, y);
  std::vector<double> mapped;
  for (double v : x) mapped.push_back(4.0 * v + 2.0);
  CHECK(pearson_distance(mapped, y) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("distance matrix consistency with per-pair calls") {
  std::mt19937_64 rng(38);
  std::vector<ReturnSeries> returns;
  for (int i = 0; i < 3; ++i) {
    returns.push_back(series_from_raw("A" + std::to_string(i),
                                      oracles::random_sample(400, rng)));
  }

  DistanceMatrix js = distance_matrix(returns, Metric::js_sqrt, 0.05);
  js.validate();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      Histogram hi(returns[i].normalized, 0.05);
      Histogram hj(returns[j].normalized, 0.05);
      CHECK(js.at(i, j) == similarity_distance(hi, hj));
      CHECK(js.at(i, j) <= oracles::kSqrtLn2 + 1e-12);
    }
  }

  DistanceMatrix kd = distance_matrix(returns, Metric::kurtosis_delta);
  DistanceMatrix pd = distance_matrix(returns, Metric::pearson);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      CHECK(kd.at(i, j) ==
            kurtosis_distance(moments(returns[i].normalized).kurtosis,
                              moments(returns[j].normalized).kurtosis));
      CHECK(pd.at(i, j) ==
            pearson_distance(returns[i].normalized, returns[j].normalized));
    }
  }
}

TEST_CASE("identical series give a zero matrix") {
  std::mt19937_64 rng(39);
  auto raw = oracles::random_sample(300, rng);
  std::vector<ReturnSeries> returns{series_from_raw("A", raw),
                                    series_from_raw("B", raw)};
  for (Metric m : {Metric::js_sqrt, Metric::kurtosis_delta, Metric::pearson}) {
    DistanceMatrix dm = distance_matrix(returns, m);
    CHECK(dm.at(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("js matrix ignores the price unit") {
  std::mt19937_64 rng(40);
  std::vector<double> prices{1.0};
  std::normal_distribution<double> g(0.0, 0.01);
  for (int i = 0; i < 400; ++i) {
    prices.push_back(prices.back() * std::exp(g(rng)));
  }
  std::vector<double> scaled;
  for (double p : prices) scaled.push_back(1000.0 * p);
  std::vector<double> other;
  other.push_back(2.0);
  for (int i = 0; i < 400; ++i) other.push_back(other.back() * std::exp(g(rng)));

  auto matrix_for = [&](const std::vector<double>& first) {
    std::vector<ReturnSeries> returns{
        series_from_raw("A", log_returns(first)),
        series_from_raw("B", log_returns(other))};
    return distance_matrix(returns, Metric::js_sqrt);
  };
  double base = matrix_for(prices).at(0, 1);
  double moved = matrix_for(scaled).at(0, 1);
  CHECK(moved == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("matrix validation rejects broken inputs") {
  DistanceMatrix dm(helpers::labels_n(3), Metric::js_sqrt);
  dm.set(0, 1, 0.5);
  dm.set(0, 2, 0.25);
  dm.set(1, 2, 0.75);
  dm.validate();

  CHECK(thrown_code([&] {
          DistanceMatrix bad = dm;
          bad.set(0, 1, -0.5);
          bad.validate();
        }) == ErrorCode::InvalidMatrix);
  CHECK(thrown_code([&] {
          DistanceMatrix bad = dm;
          bad.set(0, 1, std::nan(""));
          bad.validate();
        }) == ErrorCode::InvalidMatrix);
}

TEST_CASE("matrix csv and json round trips") {
  std::mt19937_64 rng(41);
  auto d = oracles::random_symmetric(5, rng);
  DistanceMatrix dm = helpers::matrix_of(d, Metric::pearson);

  std::ostringstream csv;
  dm.write_csv(csv);
  std::istringstream in(csv.str());
  DistanceMatrix from_csv = DistanceMatrix::read_csv(in, Metric::pearson);
  DistanceMatrix from_json = DistanceMatrix::from_json(dm.to_json());
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(from_csv.at(i, j) == dm.at(i, j));
      CHECK(from_json.at(i, j) == dm.at(i, j));
    }
  }
  CHECK(from_csv.labels() == dm.labels());
  CHECK(from_json.metric() == Metric::pearson);

  CHECK(to_string(Metric::js_sqrt) == std::string("js_sqrt"));
  CHECK(metric_from_string("js") == Metric::js_sqrt);
  CHECK(metric_from_string("kurtosis") == Metric::kurtosis_delta);
  CHECK(thrown_code([] { metric_from_string("what"); }) ==
        ErrorCode::ConfigError);
}

TEST_CASE("lower triangle ordering") {
  DistanceMatrix dm(helpers::labels_n(3), Metric::js_sqrt);
  dm.set(1, 0, 0.1);
  dm.set(2, 0, 0.2);
  dm.set(2, 1, 0.3);
  CHECK(dm.lower_triangle() == std::vector<double>{0.1, 0.2, 0.3});
}

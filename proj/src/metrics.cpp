#include "fxclust/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fxclust/error.hpp"

namespace fxclust {

namespace {

void require_same_grid(const Histogram& p, const Histogram& q) {
  if (!p.same_grid(q)) {
    throw Error(ErrorCode::GridMismatch,
                "bin widths " + std::to_string(p.bin_width()) + " vs " +
                    std::to_string(q.bin_width()));
  }
}

}  // namespace

double kl_divergence(const Histogram& p, const Histogram& q) {
  require_same_grid(p, q);
  double sum = 0.0;
  for (const auto& [bin, pp] : p.bins()) {
    double qq = q.probability(bin);
    if (qq == 0.0) {
      throw Error(ErrorCode::UndefinedKL,
                  "p has mass " + std::to_string(pp) + " on bin " +
                      std::to_string(bin) + " where q has none");
    }
    sum += pp * std::log(pp / qq);
  }
  return sum;
}

double js_divergence(const Histogram& p, const Histogram& q) {
  require_same_grid(p, q);
  const auto& pb = p.bins();
  const auto& qb = q.bins();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  // Union of supports in ascending bin order. Each term is symmetric in
  // (pp, qq), which keeps js(p,q) == js(q,p) exact.
  while (i < pb.size() || j < qb.size()) {
    double pp = 0.0, qq = 0.0;
    std::int64_t bp = i < pb.size() ? pb[i].first : INT64_MAX;
    std::int64_t bq = j < qb.size() ? qb[j].first : INT64_MAX;
    if (bp <= bq) pp = pb[i++].second;
    if (bq <= bp) qq = qb[j++].second;
    double m = pp + qq;  // 2 * mixture
    double term = 0.0;
    if (pp > 0.0) term += 0.5 * pp * std::log(2.0 * pp / m);
    if (qq > 0.0) term += 0.5 * qq * std::log(2.0 * qq / m);
    sum += term;
  }
  return sum;
}

double similarity_distance(const Histogram& p, const Histogram& q) {
  double js = js_divergence(p, q);
  return js <= 0.0 ? 0.0 : std::sqrt(js);
}

double kurtosis_distance(double k_i, double k_j) {
  if (!(k_i > 0.0) || !(k_j > 0.0)) {
    throw Error(ErrorCode::NonPositiveKurtosis,
                std::to_string(k_i) + ", " + std::to_string(k_j));
  }
  return std::abs(k_i - k_j) / (0.5 * (k_i + k_j));
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(x.size()) + " vs " +
                                               std::to_string(y.size()));
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw Error(ErrorCode::SeriesTooShort,
                "correlation needs >= 3 points, got " + std::to_string(n));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double dx = x[t] - mx;
    double dy = y[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::DegenerateSeries,
                "constant series has no correlation");
  }
  // Identical sums mean identical deviation sequences, so the correlation is
  // exactly 1; dividing by sqrt(s)^2 instead would leave rounding residue.
  if (sxy == sxx && sxy == syy) return 1.0;
  double c = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

double pearson_distance(const std::vector<double>& r_i,
                        const std::vector<double>& r_j) {
  double c = pearson_correlation(r_i, r_j);
  double d2 = 2.0 * (1.0 - c);
  return d2 <= 0.0 ? 0.0 : std::sqrt(d2);
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, Metric metric)
    : labels_(std::move(labels)),
      metric_(metric),
      values_(labels_.size() * labels_.size(), 0.0) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::InvalidMatrix, "need at least 2 labels");
  }
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double d) {
  values_[i * labels_.size() + j] = d;
  values_[j * labels_.size() + i] = d;
}

void DistanceMatrix::validate() const {
  const std::size_t n = labels_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) {
      throw Error(ErrorCode::InvalidMatrix,
                  "nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v = at(i, j);
      if (std::isnan(v) || v < 0.0) {
        throw Error(ErrorCode::InvalidMatrix,
                    "bad entry (" + std::to_string(i) + "," +
                        std::to_string(j) + ") = " + std::to_string(v));
      }
      if (v != at(j, i)) {
        throw Error(ErrorCode::InvalidMatrix,
                    "asymmetry at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }
}

std::vector<double> DistanceMatrix::lower_triangle() const {
  std::vector<double> out;
  out.reserve(size() * (size() - 1) / 2);
  for (std::size_t i = 1; i < size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) out.push_back(at(i, j));
  }
  return out;
}

void DistanceMatrix::write_csv(std::ostream& out) const {
  out << "label";
  for (const std::string& l : labels_) out << ',' << l;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < size(); ++i) {
    out << labels_[i];
    for (std::size_t j = 0; j < size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", at(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::string DistanceMatrix::to_json() const {
  nlohmann::json j;
  j["labels"] = labels_;
  j["metric"] = to_string(metric_);
  j["values"] = lower_triangle();
  return j.dump(2);
}

DistanceMatrix DistanceMatrix::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("labels") || !j.contains("metric") ||
      !j.contains("values")) {
    throw Error(ErrorCode::MalformedRow, "invalid distance matrix JSON");
  }
  DistanceMatrix dm(j["labels"].get<std::vector<std::string>>(),
                    metric_from_string(j["metric"].get<std::string>()));
  std::vector<double> tri = j["values"].get<std::vector<double>>();
  if (tri.size() != dm.size() * (dm.size() - 1) / 2) {
    throw Error(ErrorCode::MalformedRow, "triangle length mismatch");
  }
  std::size_t k = 0;
  for (std::size_t i = 1; i < dm.size(); ++i) {
    for (std::size_t j2 = 0; j2 < i; ++j2) dm.set(i, j2, tri[k++]);
  }
  dm.validate();
  return dm;
}

DistanceMatrix DistanceMatrix::read_csv(std::istream& in, Metric metric) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedRow, "empty matrix CSV");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> labels;
  {
    std::istringstream ss(line);
    std::string cell;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      labels.push_back(cell);
    }
  }
  DistanceMatrix dm(labels, metric);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= dm.size()) {
      throw Error(ErrorCode::MalformedRow, "too many matrix rows");
    }
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // row label
    for (std::size_t j = 0; j < dm.size(); ++j) {
      if (!std::getline(ss, cell, ',')) {
        throw Error(ErrorCode::MalformedRow,
                    "short matrix row " + std::to_string(row));
      }
      dm.values_[row * dm.size() + j] = std::stod(cell);
    }
    ++row;
  }
  if (row != dm.size()) {
    throw Error(ErrorCode::MalformedRow, "missing matrix rows");
  }
  dm.validate();
  return dm;
}

DistanceMatrix distance_matrix(const std::vector<ReturnSeries>& returns,
                               Metric metric, double bin_width) {
  if (returns.size() < 2) {
    throw Error(ErrorCode::InvalidMatrix,
                "need at least 2 return series, got " +
                    std::to_string(returns.size()));
  }
  std::vector<std::string> labels;
  labels.reserve(returns.size());
  for (const ReturnSeries& r : returns) labels.push_back(r.asset.code);
  DistanceMatrix dm(std::move(labels), metric);

  const std::size_t n = returns.size();
  switch (metric) {
    case Metric::js_sqrt: {
      std::vector<Histogram> hists;
      hists.reserve(n);
      for (const ReturnSeries& r : returns) {
        hists.emplace_back(r.normalized, bin_width);
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          dm.set(i, j, similarity_distance(hists[i], hists[j]));
        }
      }
      break;
    }
    case Metric::kurtosis_delta: {
      std::vector<double> kurt(n);
      for (std::size_t i = 0; i < n; ++i) {
        kurt[i] = moments(returns[i].normalized).kurtosis;
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          dm.set(i, j, kurtosis_distance(kurt[i], kurt[j]));
        }
      }
      break;
    }
    case Metric::pearson: {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          dm.set(i, j,
                 pearson_distance(returns[i].normalized, returns[j].normalized));
        }
      }
      break;
    }
    case Metric::cophenetic:
      throw Error(ErrorCode::ConfigError,
                  "cophenetic matrices come from dendrograms, not returns");
  }
  return dm;
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::js_sqrt: return "js_sqrt";
    case Metric::kurtosis_delta: return "kurtosis_delta";
    case Metric::pearson: return "pearson";
    case Metric::cophenetic: return "cophenetic";
  }
  return "js_sqrt";
}

Metric metric_from_string(const std::string& s) {
  if (s == "js" || s == "js_sqrt") return Metric::js_sqrt;
  if (s == "kurtosis" || s == "kurtosis_delta") return Metric::kurtosis_delta;
  if (s == "pearson") return Metric::pearson;
  if (s == "cophenetic") return Metric::cophenetic;
  throw Error(ErrorCode::ConfigError, "unknown metric '" + s + "'");
}

}  // namespace fxclust

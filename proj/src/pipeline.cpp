#include "fxclust/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fxclust/error.hpp"
#include "fxclust/render.hpp"

namespace fs = std::filesystem;

namespace fxclust {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& v, const std::string& key) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(ErrorCode::ConfigError, key + " must be an integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, key + " must be a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::ConfigError, key + " must be a boolean, got '" + v + "'");
}

// Wraps any library error with the pipeline stage that raised it.
template <typename F>
auto at_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("[") + stage + "] " + e.message());
  }
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::string& out_dir) : root_(out_dir) {
    fs::create_directories(root_);
  }

  void write(const std::string& relative, const std::string& content) {
    fs::path full = root_ / relative;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::IoError, "cannot write " + full.string());
    }
    out << content;
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(content)));
    entries_[relative] = {content.size(), hash};
  }

  // Manifest of every artifact with size and content fingerprint.
  std::string write_manifest(const nlohmann::json& config_echo) {
    nlohmann::json j;
    j["config"] = config_echo;
    nlohmann::json files = nlohmann::json::object();
    for (const auto& [path, info] : entries_) {
      files[path] = {{"bytes", info.first}, {"fnv1a64", info.second}};
    }
    j["outputs"] = files;
    const std::string relative = "manifest.json";
    fs::path full = root_ / relative;
    std::ofstream out(full, std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::IoError, "cannot write " + full.string());
    }
    out << j.dump(2) << '\n';
    return full.string();
  }

 private:
  fs::path root_;
  std::map<std::string, std::pair<std::size_t, std::string>> entries_;
};

std::string moments_csv(const std::vector<AssetMoments>& table) {
  std::ostringstream out;
  out << "code,variance,skewness,kurtosis\n";
  char buf[128];
  for (const AssetMoments& m : table) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g", m.code.c_str(),
                  m.variance, m.skewness, m.kurtosis);
    out << buf << '\n';
  }
  return out.str();
}

std::string cdcc_csv(const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& table) {
  std::ostringstream out;
  out << "period";
  for (const std::string& n : names) out << ',' << n;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << names[i];
    for (double v : table[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  j["input"] = cfg.input_path;
  j["meta"] = cfg.meta_path;
  j["bridge"] = cfg.bridge_path;
  j["align"] = cfg.align == AlignPolicy::intersect ? "intersect" : "ffill";
  j["orientation"] = cfg.orientation == Orientation::unknown
                         ? "unknown"
                         : (cfg.orientation == Orientation::numeraire_per_asset
                                ? "numeraire-per-asset"
                                : "asset-per-numeraire");
  j["dt-steps"] = cfg.dt_steps;
  j["bin-width"] = cfg.bin_width;
  j["metric"] = to_string(cfg.metric);
  j["linkage"] = to_string(cfg.linkage);
  j["periods"] = cfg.periods;
  j["dth"] = cfg.auto_threshold ? nlohmann::json("auto")
                                : nlohmann::json(cfg.d_th);
  j["skew-threshold"] = cfg.skew_threshold;
  j["render"] = cfg.render;
  j["dump-returns"] = cfg.dump_returns;
  return j;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "input") {
    cfg.input_path = value;
  } else if (key == "meta") {
    cfg.meta_path = value;
  } else if (key == "bridge") {
    cfg.bridge_path = value;
  } else if (key == "align") {
    if (value == "intersect") {
      cfg.align = AlignPolicy::intersect;
    } else if (value == "ffill" || value == "forward_fill") {
      cfg.align = AlignPolicy::forward_fill;
    } else {
      throw Error(ErrorCode::ConfigError, "align must be intersect or ffill");
    }
  } else if (key == "orientation") {
    if (value == "numeraire-per-asset") {
      cfg.orientation = Orientation::numeraire_per_asset;
    } else if (value == "asset-per-numeraire") {
      cfg.orientation = Orientation::asset_per_numeraire;
    } else if (value == "unknown") {
      cfg.orientation = Orientation::unknown;
    } else {
      throw Error(ErrorCode::ConfigError, "bad orientation '" + value + "'");
    }
  } else if (key == "dt-steps") {
    cfg.dt_steps = parse_int(value, key);
  } else if (key == "bin-width") {
    cfg.bin_width = parse_double(value, key);
  } else if (key == "metric") {
    cfg.metric = metric_from_string(value);
  } else if (key == "linkage") {
    cfg.linkage = linkage_from_string(value);
  } else if (key == "periods") {
    cfg.periods = parse_int(value, key);
  } else if (key == "dth") {
    if (value == "auto") {
      cfg.auto_threshold = true;
    } else {
      cfg.auto_threshold = false;
      cfg.d_th = parse_double(value, key);
      if (cfg.d_th < 0.0) {
        throw Error(ErrorCode::ConfigError, "fixed dth must be >= 0");
      }
    }
  } else if (key == "skew-threshold") {
    cfg.skew_threshold = parse_double(value, key);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "render") {
    cfg.render = parse_bool(value, key);
  } else if (key == "dump-returns") {
    cfg.dump_returns = parse_bool(value, key);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError,
                  path + " line " + std::to_string(line_no) +
                      ": expected key = value");
    }
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::vector<Dataset> split_periods(const Dataset& ds, int k) {
  if (k < 1) throw Error(ErrorCode::ConfigError, "periods must be >= 1");
  const std::size_t tau = ds.n_dates();
  if (tau < std::size_t(k) * 3) {
    throw Error(ErrorCode::TooFewDates,
                std::to_string(tau) + " dates cannot fill " + std::to_string(k) +
                    " windows of >= 3");
  }
  const std::size_t window = tau / std::size_t(k);
  std::vector<Dataset> out;
  out.reserve(std::size_t(k));
  for (int p = 0; p < k; ++p) {
    const std::size_t begin = std::size_t(p) * window;
    Dataset part;
    part.numeraire = ds.numeraire;
    part.orientation = ds.orientation;
    part.date_axis.assign(ds.date_axis.begin() + begin,
                          ds.date_axis.begin() + begin + window);
    part.assets.reserve(ds.assets.size());
    for (const RateSeries& s : ds.assets) {
      RateSeries slice;
      slice.meta = s.meta;
      slice.dates = part.date_axis;
      slice.prices.assign(s.prices.begin() + begin,
                          s.prices.begin() + begin + window);
      part.assets.push_back(std::move(slice));
    }
    out.push_back(std::move(part));
  }
  return out;
}

std::vector<std::string> skew_screen(const std::vector<ReturnSeries>& returns,
                                     double threshold) {
  std::vector<std::pair<double, std::string>> flagged;
  for (const ReturnSeries& r : returns) {
    double skew = moments(r.normalized).skewness;
    if (std::abs(skew) > threshold) {
      flagged.emplace_back(std::abs(skew), r.asset.code);
    }
  }
  std::sort(flagged.begin(), flagged.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  out.reserve(flagged.size());
  for (auto& [skew, code] : flagged) out.push_back(std::move(code));
  return out;
}

RunReport run(const RunConfig& cfg) {
  if (cfg.input_path.empty()) {
    throw Error(ErrorCode::ConfigError, "no input path configured");
  }
  if (cfg.out_dir.empty()) {
    throw Error(ErrorCode::ConfigError, "no output directory configured");
  }

  std::vector<RateSeries> series = at_stage("parse", [&] {
    return parse_rates(cfg.input_path);
  });
  if (!cfg.meta_path.empty()) {
    at_stage("metadata", [&] {
      apply_metadata(series, parse_metadata(cfg.meta_path));
      return 0;
    });
  }

  Dataset ds = at_stage("align", [&] { return align(series, cfg.align); });
  ds.orientation = cfg.orientation;
  ds.numeraire = "input";

  if (!cfg.bridge_path.empty()) {
    ds = at_stage("redenominate", [&] {
      std::vector<RateSeries> bridge = parse_rates(cfg.bridge_path);
      if (bridge.empty()) {
        throw Error(ErrorCode::MalformedRow,
                    cfg.bridge_path + " holds no series");
      }
      return redenominate(ds, bridge.front(), bridge.front().meta.code);
    });
  }

  RunReport report;
  const std::size_t window = ds.n_dates() / std::size_t(std::max(cfg.periods, 1));
  report.dropped_dates = ds.n_dates() - window * std::size_t(std::max(cfg.periods, 1));

  std::vector<Dataset> windows =
      at_stage("split", [&] { return split_periods(ds, cfg.periods); });

  ArtifactWriter writer(cfg.out_dir);

  // Full-span moments and skew screen feed the report regardless of windowing.
  std::vector<ReturnSeries> full_returns = at_stage("returns", [&] {
    std::vector<ReturnSeries> out;
    out.reserve(ds.assets.size());
    for (const RateSeries& s : ds.assets) {
      out.push_back(normalize(s, cfg.dt_steps));
    }
    return out;
  });
  for (const ReturnSeries& r : full_returns) {
    Moments m = at_stage("moments", [&] { return moments(r.normalized); });
    report.moments_table.push_back(
        AssetMoments{r.asset.code, m.variance, m.skewness, m.kurtosis});
  }
  report.skew_outliers = skew_screen(full_returns, cfg.skew_threshold);
  writer.write("moments.csv", moments_csv(report.moments_table));
  {
    std::ostringstream out;
    out << "code\n";
    for (const std::string& code : report.skew_outliers) out << code << '\n';
    writer.write("skew_outliers.csv", out.str());
  }

  std::vector<Dendrogram> trees;
  std::vector<std::string> period_names;
  for (std::size_t p = 0; p < windows.size(); ++p) {
    const std::string name =
        windows.size() == 1 ? "full" : "period_" + std::to_string(p + 1);
    period_names.push_back(name);
    const std::string stage = "period " + std::to_string(p + 1);

    std::vector<ReturnSeries> returns = at_stage(stage.c_str(), [&] {
      std::vector<ReturnSeries> out;
      out.reserve(windows[p].assets.size());
      for (const RateSeries& s : windows[p].assets) {
        out.push_back(normalize(s, cfg.dt_steps));
      }
      return out;
    });
    if (cfg.dump_returns) {
      for (const ReturnSeries& r : returns) {
        std::ostringstream out;
        write_returns_csv(r, windows[p].date_axis, cfg.dt_steps, out);
        writer.write(name + "/returns_" + r.asset.code + ".csv", out.str());
      }
    }

    DistanceMatrix dm = at_stage(stage.c_str(), [&] {
      return distance_matrix(returns, cfg.metric, cfg.bin_width);
    });
    Dendrogram dg =
        at_stage(stage.c_str(), [&] { return agglomerate(dm, cfg.linkage); });

    double d_th = cfg.d_th;
    ClusterCut cc = cfg.auto_threshold
                        ? [&] {
                            BestThreshold bt = best_threshold(dg);
                            d_th = bt.d_th;
                            return bt.cut;
                          }()
                        : cut(dg, d_th);

    PeriodResult pr;
    pr.name = name;
    pr.matrix_csv = name + "/distances.csv";
    pr.dendrogram_json = name + "/dendrogram.json";
    pr.d_th_used = d_th;
    pr.n_clusters_ge2 = cc.n_clusters_ge2;
    pr.n_isolated = cc.n_isolated;
    pr.cut = cc;

    {
      std::ostringstream out;
      dm.write_csv(out);
      writer.write(pr.matrix_csv, out.str());
    }
    writer.write(name + "/distances.json", dm.to_json());
    writer.write(pr.dendrogram_json, dg.to_json());
    writer.write(name + "/dendrogram.newick", dg.to_newick() + "\n");
    {
      std::ostringstream out;
      cc.write_csv(out);
      writer.write(name + "/clusters.csv", out.str());
    }
    if (cfg.render) {
      std::vector<AssetMeta> metas;
      metas.reserve(windows[p].assets.size());
      for (const RateSeries& s : windows[p].assets) metas.push_back(s.meta);
      RenderOptions opts;
      char title[160];
      std::snprintf(title, sizeof(title), "%s  metric=%s  linkage=%s  dth=%.4g",
                    name.c_str(), to_string(cfg.metric),
                    to_string(cfg.linkage), d_th);
      opts.title = title;
      writer.write(name + "/dendrogram.svg", render_polar(dg, cc, metas, opts));
    }

    trees.push_back(std::move(dg));
    report.periods.push_back(std::move(pr));
  }

  // Cross-period similarity of the hierarchies.
  const std::size_t k = trees.size();
  report.cdcc_table.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double value = at_stage("cdcc", [&] { return cdcc(trees[i], trees[j]); });
      report.cdcc_table[i][j] = value;
      report.cdcc_table[j][i] = value;
    }
  }
  writer.write("cdcc.csv", cdcc_csv(period_names, report.cdcc_table));

  report.manifest_path = writer.write_manifest(config_echo(cfg));
  return report;
}

}  // namespace fxclust

// Command-line front end: ingest/distances/cluster/cut/cdcc/run/render plus
// a synthetic-panel generator for demos and benchmarks.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "fxclust/error.hpp"
#include "fxclust/pipeline.hpp"
#include "fxclust/render.hpp"

namespace fs = std::filesystem;
using namespace fxclust;

namespace {

int exit_code_for(const Error& e) {
  return e.category() == ErrorCategory::input ? 2 : 3;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (!fs::path(path).parent_path().empty()) {
    fs::create_directories(fs::path(path).parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
}

AlignPolicy align_from(const std::string& s) {
  if (s == "intersect") return AlignPolicy::intersect;
  if (s == "ffill" || s == "forward_fill") return AlignPolicy::forward_fill;
  throw Error(ErrorCode::ConfigError, "align must be intersect or ffill");
}

std::vector<ReturnSeries> panel_returns(const Dataset& ds, int dt_steps) {
  std::vector<ReturnSeries> out;
  out.reserve(ds.assets.size());
  for (const RateSeries& s : ds.assets) out.push_back(normalize(s, dt_steps));
  return out;
}

ClusterCut cut_for(const Dendrogram& dg, const std::string& dth,
                   double* used = nullptr) {
  if (dth == "auto") {
    BestThreshold bt = best_threshold(dg);
    if (used) *used = bt.d_th;
    return bt.cut;
  }
  double value = std::stod(dth);
  if (used) *used = value;
  return cut(dg, value);
}

// Synthetic daily panel: geometric series driven by Gaussian returns, with an
// optional heavy-tailed group (Student-t) for clustering demos.
void generate_panel(const std::string& out_path, int assets, int days,
                    unsigned seed, int heavy_assets, double volatility) {
  if (assets < 2 || days < 3) {
    throw Error(ErrorCode::ConfigError, "need >= 2 assets and >= 3 days");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, volatility);
  std::student_t_distribution<double> heavy(3.0);

  std::ostringstream out;
  out << "date";
  for (int a = 0; a < assets; ++a) {
    char code[16];
    std::snprintf(code, sizeof(code), "A%02d", a);
    out << ',' << code;
  }
  out << '\n';

  std::vector<double> log_price(std::size_t(assets), 0.0);
  Date start = Date::from_ymd(2000, 1, 1);
  char buf[40];
  for (int t = 0; t < days; ++t) {
    out << Date(start.serial() + t).to_string();
    for (int a = 0; a < assets; ++a) {
      if (t > 0) {
        double r = a < heavy_assets ? heavy(rng) * volatility : gauss(rng);
        log_price[std::size_t(a)] += r;
      }
      std::snprintf(buf, sizeof(buf), "%.17g", std::exp(log_price[std::size_t(a)]));
      out << ',' << buf;
    }
    out << '\n';
  }
  write_file(out_path, out.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical clustering of time-series panels by the "
               "statistical similarity of their fluctuation distributions"};
  app.require_subcommand(1);

  // shared option storage
  std::string input, meta_path, bridge, align_policy = "intersect";
  std::string orientation = "unknown";
  std::string metric = "js", linkage = "complete", dth = "auto";
  std::string out_path, config_path;
  std::string dendro_a, dendro_b, matrix_path, clusters_path;
  int dt_steps = 1, periods = 1, assets = 20, days = 2000, heavy = 0;
  unsigned seed = 42;
  double bin_width = 0.05, skew_threshold = 0.5, volatility = 0.01;
  bool no_render = false, dump_returns = false;

  CLI::App* c_ingest =
      app.add_subcommand("ingest", "Validate a panel and write canonical CSV");
  c_ingest->add_option("--input", input, "rates CSV (wide or long)")->required();
  c_ingest->add_option("--meta", meta_path, "sidecar metadata CSV");
  c_ingest->add_option("--align", align_policy, "intersect|ffill");
  c_ingest->add_option("--out", out_path, "canonical wide CSV (default stdout)");

  CLI::App* c_dist =
      app.add_subcommand("distances", "Pairwise distance matrix of a panel");
  c_dist->add_option("--input", input)->required();
  c_dist->add_option("--meta", meta_path);
  c_dist->add_option("--align", align_policy);
  c_dist->add_option("--dt-steps", dt_steps);
  c_dist->add_option("--metric", metric, "js|kurtosis|pearson");
  c_dist->add_option("--bin-width", bin_width);
  c_dist->add_option("--out", out_path, "output directory")->required();

  CLI::App* c_cluster =
      app.add_subcommand("cluster", "Dendrogram from a distance matrix CSV");
  c_cluster->add_option("--matrix", matrix_path)->required();
  c_cluster->add_option("--metric", metric, "metric tag of the matrix");
  c_cluster->add_option("--linkage", linkage, "single|complete|average");
  c_cluster->add_option("--out", out_path, "output directory")->required();

  CLI::App* c_cut =
      app.add_subcommand("cut", "Flat clusters from a dendrogram JSON");
  c_cut->add_option("--dendrogram", dendro_a)->required();
  c_cut->add_option("--dth", dth, "auto or a threshold value");
  c_cut->add_option("--out", out_path, "clusters CSV (default stdout)");

  CLI::App* c_cdcc = app.add_subcommand(
      "cdcc", "Cophenetic distance correlation of two dendrograms");
  c_cdcc->add_option("--dendrogram", dendro_a)->required();
  c_cdcc->add_option("--dendrogram2", dendro_b)->required();

  CLI::App* c_run = app.add_subcommand("run", "Full pipeline");
  c_run->add_option("--config", config_path, "flat key=value config file");
  c_run->add_option("--input", input);
  c_run->add_option("--meta", meta_path);
  c_run->add_option("--bridge", bridge, "numeraire bridge CSV");
  c_run->add_option("--align", align_policy);
  c_run->add_option("--orientation", orientation,
                    "numeraire-per-asset|asset-per-numeraire");
  c_run->add_option("--dt-steps", dt_steps);
  c_run->add_option("--metric", metric);
  c_run->add_option("--linkage", linkage);
  c_run->add_option("--bin-width", bin_width);
  c_run->add_option("--periods", periods);
  c_run->add_option("--dth", dth);
  c_run->add_option("--skew-threshold", skew_threshold);
  c_run->add_option("--out", out_path, "output directory");
  c_run->add_flag("--no-render", no_render, "skip SVG figures");
  c_run->add_flag("--dump-returns", dump_returns, "write per-asset return CSVs");

  CLI::App* c_render =
      app.add_subcommand("render", "Polar dendrogram SVG from dendrogram JSON");
  c_render->add_option("--dendrogram", dendro_a)->required();
  c_render->add_option("--meta", meta_path);
  c_render->add_option("--dth", dth);
  c_render->add_option("--out", out_path, "SVG path")->required();

  CLI::App* c_synth =
      app.add_subcommand("synth", "Generate a synthetic panel CSV");
  c_synth->add_option("--assets", assets);
  c_synth->add_option("--days", days);
  c_synth->add_option("--seed", seed);
  c_synth->add_option("--heavy-assets", heavy,
                      "first k assets draw Student-t returns");
  c_synth->add_option("--volatility", volatility);
  c_synth->add_option("--out", out_path, "panel CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_ingest->parsed()) {
      std::vector<RateSeries> series = parse_rates(input);
      if (!meta_path.empty()) apply_metadata(series, parse_metadata(meta_path));
      Dataset ds = align(series, align_from(align_policy));
      std::ostringstream csv;
      write_dataset_csv(ds, csv);
      if (out_path.empty()) {
        std::cout << csv.str();
      } else {
        write_file(out_path, csv.str());
      }
      std::fprintf(stderr, "%zu assets on %zu dates\n", ds.n_assets(),
                   ds.n_dates());
    } else if (c_dist->parsed()) {
      std::vector<RateSeries> series = parse_rates(input);
      if (!meta_path.empty()) apply_metadata(series, parse_metadata(meta_path));
      Dataset ds = align(series, align_from(align_policy));
      DistanceMatrix dm = distance_matrix(panel_returns(ds, dt_steps),
                                          metric_from_string(metric), bin_width);
      std::ostringstream csv;
      dm.write_csv(csv);
      write_file((fs::path(out_path) / "distances.csv").string(), csv.str());
      write_file((fs::path(out_path) / "distances.json").string(),
                 dm.to_json());
      std::fprintf(stderr, "%zu x %zu %s matrix -> %s\n", dm.size(), dm.size(),
                   to_string(dm.metric()), out_path.c_str());
    } else if (c_cluster->parsed()) {
      std::ifstream in(matrix_path);
      if (!in) throw Error(ErrorCode::IoError, "cannot open " + matrix_path);
      DistanceMatrix dm =
          DistanceMatrix::read_csv(in, metric_from_string(metric));
      Dendrogram dg = agglomerate(dm, linkage_from_string(linkage));
      write_file((fs::path(out_path) / "dendrogram.json").string(),
                 dg.to_json());
      write_file((fs::path(out_path) / "dendrogram.newick").string(),
                 dg.to_newick() + "\n");
      std::fprintf(stderr, "%zu merges, max height %.6g -> %s\n",
                   dg.merges.size(), dg.max_height(), out_path.c_str());
    } else if (c_cut->parsed()) {
      Dendrogram dg = Dendrogram::from_json(read_file(dendro_a));
      double used = 0.0;
      ClusterCut cc = cut_for(dg, dth, &used);
      std::ostringstream csv;
      cc.write_csv(csv);
      if (out_path.empty()) {
        std::cout << csv.str();
      } else {
        write_file(out_path, csv.str());
      }
      std::fprintf(stderr,
                   "dth=%.6g  clusters>=2: %zu  isolated: %zu\n", used,
                   cc.n_clusters_ge2, cc.n_isolated);
    } else if (c_cdcc->parsed()) {
      Dendrogram a = Dendrogram::from_json(read_file(dendro_a));
      Dendrogram b = Dendrogram::from_json(read_file(dendro_b));
      std::printf("%.17g\n", cdcc(a, b));
    } else if (c_run->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      // explicit flags override the file
      if (*c_run->get_option("--input")) cfg.input_path = input;
      if (*c_run->get_option("--meta")) cfg.meta_path = meta_path;
      if (*c_run->get_option("--bridge")) cfg.bridge_path = bridge;
      if (*c_run->get_option("--align")) apply_config_entry(cfg, "align", align_policy);
      if (*c_run->get_option("--orientation")) {
        apply_config_entry(cfg, "orientation", orientation);
      }
      if (*c_run->get_option("--dt-steps")) cfg.dt_steps = dt_steps;
      if (*c_run->get_option("--metric")) cfg.metric = metric_from_string(metric);
      if (*c_run->get_option("--linkage")) {
        cfg.linkage = linkage_from_string(linkage);
      }
      if (*c_run->get_option("--bin-width")) cfg.bin_width = bin_width;
      if (*c_run->get_option("--periods")) cfg.periods = periods;
      if (*c_run->get_option("--dth")) apply_config_entry(cfg, "dth", dth);
      if (*c_run->get_option("--skew-threshold")) {
        cfg.skew_threshold = skew_threshold;
      }
      if (*c_run->get_option("--out")) cfg.out_dir = out_path;
      if (no_render) cfg.render = false;
      if (dump_returns) cfg.dump_returns = true;

      RunReport report = run(cfg);
      for (const PeriodResult& pr : report.periods) {
        std::printf("%s: dth=%.6g clusters>=2: %zu isolated: %zu\n",
                    pr.name.c_str(), pr.d_th_used, pr.n_clusters_ge2,
                    pr.n_isolated);
      }
      if (report.cdcc_table.size() > 1) {
        for (std::size_t i = 0; i + 1 < report.cdcc_table.size(); ++i) {
          std::printf("cdcc(%zu,%zu) = %.6g\n", i + 1, i + 2,
                      report.cdcc_table[i][i + 1]);
        }
      }
      if (!report.skew_outliers.empty()) {
        std::printf("skew outliers:");
        for (const std::string& code : report.skew_outliers) {
          std::printf(" %s", code.c_str());
        }
        std::printf("\n");
      }
      if (report.dropped_dates > 0) {
        std::printf("dropped %zu trailing dates (not divisible by %d)\n",
                    report.dropped_dates, cfg.periods);
      }
      std::printf("manifest: %s\n", report.manifest_path.c_str());
    } else if (c_render->parsed()) {
      Dendrogram dg = Dendrogram::from_json(read_file(dendro_a));
      double used = 0.0;
      ClusterCut cc = cut_for(dg, dth, &used);
      std::vector<AssetMeta> metas;
      if (!meta_path.empty()) {
        for (auto& [code, m] : parse_metadata(meta_path)) metas.push_back(m);
      }
      RenderOptions opts;
      char title[64];
      std::snprintf(title, sizeof(title), "dth=%.4g", used);
      opts.title = title;
      write_file(out_path, render_polar(dg, cc, metas, opts));
      std::fprintf(stderr, "dth=%.6g -> %s\n", used, out_path.c_str());
    } else if (c_synth->parsed()) {
      generate_panel(out_path, assets, days, seed, heavy, volatility);
      std::fprintf(stderr, "%d assets x %d days (seed %u) -> %s\n", assets,
                   days, seed, out_path.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fxclust/hcluster.hpp"
#include "fxclust/ingest.hpp"
#include "fxclust/metrics.hpp"
#include "fxclust/returns.hpp"

namespace fxclust {

// One batch run: ingestion through clustering, rendering and report files.
struct RunConfig {
  std::string input_path;
  std::string meta_path;    // optional sidecar metadata
  std::string bridge_path;  // optional numeraire bridge series
  AlignPolicy align = AlignPolicy::intersect;
  Orientation orientation = Orientation::unknown;
  int dt_steps = 1;
  double bin_width = 0.05;
  Metric metric = Metric::js_sqrt;
  Linkage linkage = Linkage::complete;
  int periods = 1;            // equal non-overlapping windows; 1 = whole span
  bool auto_threshold = true; // else cut at d_th
  double d_th = 0.0;
  double skew_threshold = 0.5;
  std::string out_dir;
  bool render = true;
  bool dump_returns = false;
};

// Flat key = value file mirroring the CLI flags; '#' starts a comment.
// Unknown keys are rejected. CLI flags override file values.
RunConfig load_config(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

struct PeriodResult {
  std::string name;
  std::string matrix_csv;       // paths relative to out_dir
  std::string dendrogram_json;
  double d_th_used;
  std::size_t n_clusters_ge2;
  std::size_t n_isolated;
  ClusterCut cut;
};

struct AssetMoments {
  std::string code;
  double variance;
  double skewness;
  double kurtosis;
};

struct RunReport {
  std::vector<PeriodResult> periods;
  std::vector<std::vector<double>> cdcc_table;  // symmetric, unit diagonal
  std::vector<AssetMoments> moments_table;      // full span
  std::vector<std::string> skew_outliers;       // |skewness| desc
  std::size_t dropped_dates;
  std::string manifest_path;
};

// Slices the aligned panel into k contiguous windows of floor(tau/k) dates;
// the tau mod k trailing dates are dropped.
std::vector<Dataset> split_periods(const Dataset& ds, int k);

// Asset codes whose full-span |skewness| exceeds the threshold, most skewed
// first.
std::vector<std::string> skew_screen(const std::vector<ReturnSeries>& returns,
                                     double threshold);

// Executes the whole pipeline and writes every artifact plus a manifest of
// output paths and content fingerprints under cfg.out_dir. Deterministic:
// identical inputs and config give byte-identical files.
RunReport run(const RunConfig& cfg);

// FNV-1a content fingerprint used by the manifest (not cryptographic).
std::uint64_t fnv1a64(std::string_view data);

}  // namespace fxclust

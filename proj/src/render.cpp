#include "fxclust/render.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace fxclust {

namespace {

constexpr const char* kPalette[] = {
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628",
    "#f781bf", "#00ced1", "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
};
constexpr int kPaletteSize = int(sizeof(kPalette) / sizeof(kPalette[0]));

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

const char* region_color(const std::string& region) {
  if (region == "Europe") return "red";
  if (region == "Middle East") return "blue";
  if (region == "Asia-Pacific") return "magenta";
  if (region == "Africa") return "green";
  if (region == "Asia") return "brown";
  return "black";  // Americas and anything unmapped
}

const char* cluster_color(int cluster_id) {
  return kPalette[((cluster_id % kPaletteSize) + kPaletteSize) % kPaletteSize];
}

std::string render_polar(const Dendrogram& dg, const ClusterCut& cut,
                         const std::vector<AssetMeta>& meta,
                         const RenderOptions& options) {
  const std::size_t n = dg.n_leaves();
  const std::size_t total = n + dg.merges.size();
  const double cx = options.canvas / 2.0;
  const double cy = options.canvas / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;

  std::map<std::string, const AssetMeta*> meta_of;
  for (const AssetMeta& m : meta) meta_of[m.code] = &m;

  // angle: leaves equally spaced around the circle in dendrogram order,
  // internal nodes at the mean of their children
  std::vector<double> angle(total, 0.0);
  {
    std::vector<std::size_t> order = dg.leaf_order();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      angle[order[pos]] =
          two_pi * (double(pos) + 0.5) / double(n) - std::numbers::pi / 2.0;
    }
    for (std::size_t k = 0; k < dg.merges.size(); ++k) {
      angle[n + k] =
          0.5 * (angle[dg.merges[k].left] + angle[dg.merges[k].right]);
    }
  }

  // radius: proportional to merge height, leaves outermost
  const double h_max = dg.max_height();
  const double span = options.leaf_radius - options.root_radius;
  auto radius_of = [&](std::size_t node) {
    double h = node < n ? 0.0 : dg.merges[node - n].height;
    return h_max > 0.0 ? options.leaf_radius - span * (h / h_max)
                       : options.leaf_radius;
  };
  auto px = [&](double r, double a) { return cx + r * std::cos(a); };
  auto py = [&](double r, double a) { return cy + r * std::sin(a); };

  // A branch is colored when every leaf under it lives in one cluster of
  // >= 2 members; isolated leaves and mixed subtrees stay black.
  std::vector<std::size_t> cluster_members(cut.n_clusters(), 0);
  for (const auto& [label, id] : cut.assignment) {
    cluster_members[std::size_t(id)] += 1;
  }
  std::vector<int> uniform_cluster(total, -1);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    auto it = cut.assignment.find(dg.labels[leaf]);
    int id = it == cut.assignment.end() ? -1 : it->second;
    if (id >= 0 && cluster_members[std::size_t(id)] >= 2) {
      uniform_cluster[leaf] = id;
    }
  }
  for (std::size_t k = 0; k < dg.merges.size(); ++k) {
    int l = uniform_cluster[dg.merges[k].left];
    int r = uniform_cluster[dg.merges[k].right];
    uniform_cluster[n + k] = (l >= 0 && l == r) ? l : -1;
  }
  auto stroke_of = [&](std::size_t node) {
    int id = uniform_cluster[node];
    return id >= 0 ? cluster_color(id) : "black";
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << num(options.canvas) << ' ' << num(options.canvas) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // radial branch from each non-root node up to its parent's radius
  std::vector<std::size_t> parent(total, total);
  for (std::size_t k = 0; k < dg.merges.size(); ++k) {
    parent[dg.merges[k].left] = n + k;
    parent[dg.merges[k].right] = n + k;
  }
  for (std::size_t node = 0; node + 1 < total; ++node) {
    double a = angle[node];
    double r0 = radius_of(node);
    double r1 = radius_of(parent[node]);
    svg << "<line x1=\"" << num(px(r0, a)) << "\" y1=\"" << num(py(r0, a))
        << "\" x2=\"" << num(px(r1, a)) << "\" y2=\"" << num(py(r1, a))
        << "\" stroke=\"" << stroke_of(node) << "\" stroke-width=\"1.5\"/>\n";
  }

  // connecting arc at each merge radius
  for (std::size_t k = 0; k < dg.merges.size(); ++k) {
    const Merge& m = dg.merges[k];
    double r = radius_of(n + k);
    double a0 = angle[m.left];
    double a1 = angle[m.right];
    if (a0 > a1) std::swap(a0, a1);
    int large = (a1 - a0) > std::numbers::pi ? 1 : 0;
    svg << "<path d=\"M " << num(px(r, a0)) << ' ' << num(py(r, a0)) << " A "
        << num(r) << ' ' << num(r) << " 0 " << large << " 1 " << num(px(r, a1))
        << ' ' << num(py(r, a1)) << "\" fill=\"none\" stroke=\""
        << stroke_of(n + k) << "\" stroke-width=\"1.5\"/>\n";
  }

  // leaf labels, rotated along the radius and flipped on the left half
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    double a = angle[leaf];
    double r = options.leaf_radius + options.label_gap;
    const AssetMeta* am = nullptr;
    auto it = meta_of.find(dg.labels[leaf]);
    if (it != meta_of.end()) am = it->second;

    double size = options.label_base_size;
    if (am && am->gdp_per_capita) {
      size = options.label_size_offset +
             options.label_size_per_decade * std::log10(*am->gdp_per_capita);
    }
    const char* color = am ? region_color(am->region) : "black";

    double deg = a * 180.0 / std::numbers::pi;
    bool flip = deg > 90.0 && deg < 270.0;
    std::string anchor = flip ? "end" : "start";
    if (flip) deg += 180.0;
    svg << "<text x=\"" << num(px(r, a)) << "\" y=\"" << num(py(r, a))
        << "\" font-size=\"" << num(size) << "\" fill=\"" << color
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
        << "\" dominant-baseline=\"middle\" transform=\"rotate(" << num(deg)
        << ' ' << num(px(r, a)) << ' ' << num(py(r, a)) << ")\">"
        << dg.labels[leaf] << "</text>\n";
  }

  if (!options.title.empty()) {
    svg << "<text x=\"" << num(cx) << "\" y=\"" << num(cy)
        << "\" font-size=\"12\" fill=\"#444\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\">"
        << options.title << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fxclust

#pragma once

#include <string>
#include <vector>

#include "fxclust/hcluster.hpp"
#include "fxclust/types.hpp"

namespace fxclust {

// Geometry and typography for the polar dendrogram. Defaults fit a 1000x1000
// canvas. Label size grows linearly with log10(gdp_per_capita); assets
// without the figure get label_base_size.
struct RenderOptions {
  double canvas = 1000.0;
  double leaf_radius = 330.0;
  double root_radius = 40.0;
  double label_gap = 12.0;
  double label_base_size = 10.0;
  double label_size_offset = 4.0;
  double label_size_per_decade = 3.0;
  std::string title;  // drawn at the center when non-empty
};

// Polar dendrogram as a standalone SVG document. Leaves sit on a circle in
// dendrogram order; a branch's radial position is proportional to its merge
// height (root innermost). Branches of clusters with >= 2 members get a
// palette color cycling by cluster id, everything else is black. Label color
// follows the region: Americas black, Europe red, Middle East blue,
// Asia-Pacific magenta, Africa green, Asia brown. Output carries no
// timestamp, so identical inputs render byte-identical documents.
std::string render_polar(const Dendrogram& dg, const ClusterCut& cut,
                         const std::vector<AssetMeta>& meta,
                         const RenderOptions& options = {});

const char* region_color(const std::string& region);
const char* cluster_color(int cluster_id);

}  // namespace fxclust

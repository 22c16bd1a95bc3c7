#include "fxclust/hcluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "fxclust/error.hpp"

namespace fxclust {

namespace {

std::string format_height(double h) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", h);
  return buf;
}

}  // namespace

double Dendrogram::max_height() const {
  double h = 0.0;
  for (const Merge& m : merges) h = std::max(h, m.height);
  return h;
}

std::vector<std::size_t> Dendrogram::leaf_order() const {
  const std::size_t n = n_leaves();
  std::vector<std::size_t> order;
  order.reserve(n);
  if (merges.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  std::vector<std::size_t> stack = {n + merges.size() - 1};
  while (!stack.empty()) {
    std::size_t node = stack.back();
    stack.pop_back();
    if (node < n) {
      order.push_back(node);
    } else {
      const Merge& m = merges[node - n];
      stack.push_back(m.right);  // left child visited first
      stack.push_back(m.left);
    }
  }
  return order;
}

std::string Dendrogram::to_newick() const {
  const std::size_t n = n_leaves();
  // child branch length = parent height - child height; leaves sit at 0
  auto height_of = [&](std::size_t node) {
    return node < n ? 0.0 : merges[node - n].height;
  };
  std::vector<std::string> rendered(n + merges.size());
  for (std::size_t i = 0; i < n; ++i) rendered[i] = labels[i];
  for (std::size_t k = 0; k < merges.size(); ++k) {
    const Merge& m = merges[k];
    double h = m.height;
    rendered[n + k] = "(" + rendered[m.left] + ":" +
                      format_height(h - height_of(m.left)) + "," +
                      rendered[m.right] + ":" +
                      format_height(h - height_of(m.right)) + ")";
  }
  return rendered.back() + ";";
}

std::string Dendrogram::to_json() const {
  nlohmann::json j;
  j["labels"] = labels;
  nlohmann::json ms = nlohmann::json::array();
  for (const Merge& m : merges) {
    ms.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}});
  }
  j["merges"] = ms;
  return j.dump(2);
}

Dendrogram Dendrogram::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("labels") || !j.contains("merges")) {
    throw Error(ErrorCode::MalformedRow, "invalid dendrogram JSON");
  }
  Dendrogram dg;
  dg.labels = j["labels"].get<std::vector<std::string>>();
  for (const auto& m : j["merges"]) {
    dg.merges.push_back(Merge{m.at("left").get<std::size_t>(),
                              m.at("right").get<std::size_t>(),
                              m.at("height").get<double>()});
  }
  if (dg.merges.size() + 1 != dg.labels.size()) {
    throw Error(ErrorCode::MalformedRow,
                "dendrogram needs exactly N-1 merges");
  }
  return dg;
}

Dendrogram agglomerate(const DistanceMatrix& dm, Linkage linkage) {
  dm.validate();
  const std::size_t n = dm.size();

  // slot-indexed working state; merged clusters free their slot
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = dm.at(i, j);
  }
  std::vector<std::size_t> node_id(n);
  std::iota(node_id.begin(), node_id.end(), 0);
  std::vector<std::size_t> cluster_size(n, 1);
  std::vector<bool> active(n, true);

  Dendrogram dg;
  dg.labels = dm.labels();
  dg.merges.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    std::pair<std::size_t, std::size_t> best_ids{0, 0};
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        double d = dist[i * n + j];
        std::pair<std::size_t, std::size_t> ids =
            std::minmax(node_id[i], node_id[j]);
        if (!found || d < best || (d == best && ids < best_ids)) {
          best = d;
          bi = i;
          bj = j;
          best_ids = ids;
          found = true;
        }
      }
    }

    dg.merges.push_back(Merge{best_ids.first, best_ids.second, best});

    const std::size_t na = cluster_size[bi];
    const std::size_t nb = cluster_size[bj];
    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == bi || x == bj) continue;
      double da = dist[bi * n + x];
      double db = dist[bj * n + x];
      double d;
      switch (linkage) {
        case Linkage::single: d = std::min(da, db); break;
        case Linkage::complete: d = std::max(da, db); break;
        case Linkage::average:
        default:
          d = (double(na) * da + double(nb) * db) / double(na + nb);
          break;
      }
      dist[bi * n + x] = d;
      dist[x * n + bi] = d;
    }
    node_id[bi] = n + step;
    cluster_size[bi] = na + nb;
    active[bj] = false;
  }
  return dg;
}

ClusterCut cut(const Dendrogram& dg, double d_th) {
  const std::size_t n = dg.n_leaves();
  const std::size_t total = n + dg.merges.size();

  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  // An unapplied merge leaves its node as a phantom singleton, so any later
  // applied merge through it cannot reconnect the children.
  for (std::size_t k = 0; k < dg.merges.size(); ++k) {
    const Merge& m = dg.merges[k];
    if (m.height < d_th) {
      parent[find(m.left)] = n + k;
      parent[find(m.right)] = n + k;
    }
  }

  ClusterCut cc;
  cc.threshold = d_th;
  std::map<std::size_t, int> cluster_of_root;
  std::vector<std::size_t> members_per_cluster;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    std::size_t root = find(leaf);
    auto [it, inserted] =
        cluster_of_root.try_emplace(root, int(members_per_cluster.size()));
    if (inserted) members_per_cluster.push_back(0);
    members_per_cluster[std::size_t(it->second)] += 1;
    cc.assignment[dg.labels[leaf]] = it->second;
  }
  cc.n_clusters_ge2 = 0;
  cc.n_isolated = 0;
  for (std::size_t count : members_per_cluster) {
    if (count >= 2) {
      ++cc.n_clusters_ge2;
    } else {
      ++cc.n_isolated;
    }
  }
  return cc;
}

void ClusterCut::write_csv(std::ostream& out) const {
  out << "label,cluster_id\n";
  for (const auto& [label, id] : assignment) {
    out << label << ',' << id << '\n';
  }
}

BestThreshold best_threshold(const Dendrogram& dg, bool count_singletons) {
  std::vector<double> heights;
  heights.reserve(dg.merges.size());
  for (const Merge& m : dg.merges) heights.push_back(m.height);
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

  std::vector<double> candidates;
  for (std::size_t i = 0; i + 1 < heights.size(); ++i) {
    candidates.push_back(0.5 * (heights[i] + heights[i + 1]));
  }
  candidates.push_back(heights.empty() ? 1.0 : heights.back() + 1.0);

  BestThreshold best{candidates.front(), cut(dg, candidates.front())};
  auto score = [&](const ClusterCut& cc) {
    return count_singletons ? cc.n_clusters() : cc.n_clusters_ge2;
  };
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    ClusterCut cc = cut(dg, candidates[i]);
    if (score(cc) > score(best.cut)) {
      best.d_th = candidates[i];
      best.cut = std::move(cc);
    }
  }
  return best;
}

DistanceMatrix cophenetic_matrix(const Dendrogram& dg) {
  const std::size_t n = dg.n_leaves();
  DistanceMatrix dm(dg.labels, Metric::cophenetic);
  std::vector<std::vector<std::size_t>> leaves(n + dg.merges.size());
  for (std::size_t i = 0; i < n; ++i) leaves[i] = {i};
  for (std::size_t k = 0; k < dg.merges.size(); ++k) {
    const Merge& m = dg.merges[k];
    for (std::size_t a : leaves[m.left]) {
      for (std::size_t b : leaves[m.right]) dm.set(a, b, m.height);
    }
    leaves[n + k] = leaves[m.left];
    leaves[n + k].insert(leaves[n + k].end(), leaves[m.right].begin(),
                         leaves[m.right].end());
  }
  return dm;
}

double cdcc(const Dendrogram& a, const Dendrogram& b) {
  if (a.labels.size() != b.labels.size()) {
    throw Error(ErrorCode::LabelMismatch,
                std::to_string(a.labels.size()) + " vs " +
                    std::to_string(b.labels.size()) + " labels");
  }
  std::map<std::string, std::size_t> index_b;
  for (std::size_t i = 0; i < b.labels.size(); ++i) index_b[b.labels[i]] = i;
  std::vector<std::size_t> remap(a.labels.size());
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    auto it = index_b.find(a.labels[i]);
    if (it == index_b.end()) {
      throw Error(ErrorCode::LabelMismatch,
                  "label " + a.labels[i] + " missing from second dendrogram");
    }
    remap[i] = it->second;
  }

  DistanceMatrix ca = cophenetic_matrix(a);
  DistanceMatrix cb = cophenetic_matrix(b);
  const std::size_t n = a.labels.size();
  std::vector<double> x, y;
  x.reserve(n * (n - 1) / 2);
  y.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      x.push_back(ca.at(i, j));
      y.push_back(cb.at(remap[i], remap[j]));
    }
  }
  auto all_equal = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) ==
           v.end();
  };
  if (all_equal(x) || all_equal(y)) {
    throw Error(ErrorCode::DegenerateHeights,
                "all cophenetic distances equal in one dendrogram");
  }
  if (x == y) return 1.0;  // identical trees correlate exactly

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= double(x.size());
  my /= double(y.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double dx = x[k] - mx;
    double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return r;
}

MstReport mst_check(const DistanceMatrix& dm, double tolerance) {
  dm.validate();
  const std::size_t n = dm.size();

  // Prim's algorithm
  std::vector<bool> in_tree(n, false);
  std::vector<double> best_edge(n, std::numeric_limits<double>::infinity());
  std::vector<double> mst;
  mst.reserve(n - 1);
  in_tree[0] = true;
  for (std::size_t j = 1; j < n; ++j) best_edge[j] = dm.at(0, j);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j] && (pick == n || best_edge[j] < best_edge[pick])) {
        pick = j;
      }
    }
    mst.push_back(best_edge[pick]);
    in_tree[pick] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j]) best_edge[j] = std::min(best_edge[j], dm.at(pick, j));
    }
  }
  std::sort(mst.begin(), mst.end());

  Dendrogram dg = agglomerate(dm, Linkage::single);
  std::vector<double> heights;
  heights.reserve(dg.merges.size());
  for (const Merge& m : dg.merges) heights.push_back(m.height);
  std::sort(heights.begin(), heights.end());

  MstReport report;
  report.mst_weights = std::move(mst);
  report.linkage_heights = std::move(heights);
  report.max_discrepancy = 0.0;
  for (std::size_t i = 0; i < report.mst_weights.size(); ++i) {
    report.max_discrepancy =
        std::max(report.max_discrepancy,
                 std::abs(report.mst_weights[i] - report.linkage_heights[i]));
  }
  report.pass = report.max_discrepancy <= tolerance;
  return report;
}

const char* to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "complete";
}

Linkage linkage_from_string(const std::string& s) {
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  if (s == "average") return Linkage::average;
  throw Error(ErrorCode::ConfigError, "unknown linkage '" + s + "'");
}

}  // namespace fxclust

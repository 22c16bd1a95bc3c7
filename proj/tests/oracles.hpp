// Independent reference implementations and frozen high-precision values the
// tests check the library against. Everything here is deliberately naive:
// direct sums, explicit member lists, a separate MST algorithm.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fxclust/error.hpp"

namespace oracles {

// ln(1.02)
inline constexpr double kLogReturn102 = 0.019802627296179713;
// 0.5*ln2 + 0.5*ln(2/3)
inline constexpr double kKlHalfHalf = 0.14384103622589046;
// JS((1,0),(0.5,0.5))
inline constexpr double kJsPointVsUniform = 0.21576155433883570;
// sqrt of the above
inline constexpr double kDPointVsUniform = 0.46450140402245901;
inline constexpr double kLn2 = 0.69314718055994531;
inline constexpr double kSqrtLn2 = 0.83255461115769776;
// Phi(0.05) - Phi(0) for a standard normal
inline constexpr double kNormalBin0Mass = 0.019938805838372456;

template <typename F>
fxclust::ErrorCode thrown_code(F&& f) {
  try {
    f();
  } catch (const fxclust::Error& e) {
    return e.code();
  }
  return static_cast<fxclust::ErrorCode>(-1);
}

// O(T^2) leave-one-out volatility: for each t, sum the squared deviations
// over every other index directly.
struct NaiveLoo {
  double mean;
  std::vector<double> sigma;
};

inline NaiveLoo naive_loo(const std::vector<double>& raw) {
  const std::size_t n = raw.size();
  NaiveLoo out;
  out.mean = std::accumulate(raw.begin(), raw.end(), 0.0) / double(n);
  out.sigma.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == t) continue;
      double d = raw[u] - out.mean;
      sum += d * d;
    }
    out.sigma[t] = std::sqrt(sum / double(n - 2));
  }
  return out;
}

inline double plain_pearson(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

// Agglomeration recomputed from scratch each step: inter-cluster distances
// are evaluated over the explicit member lists against the original matrix,
// not maintained incrementally. Same tie rule as the library: smallest
// (node id, node id) pair.
struct BruteMerge {
  std::size_t left;
  std::size_t right;
  double height;
};

enum class BruteLinkage { single, complete, average };

inline double brute_cluster_distance(const std::vector<std::vector<double>>& d,
                                     const std::vector<std::size_t>& a,
                                     const std::vector<std::size_t>& b,
                                     BruteLinkage linkage) {
  double best = linkage == BruteLinkage::single
                    ? std::numeric_limits<double>::infinity()
                    : 0.0;
  double sum = 0.0;
  for (std::size_t i : a) {
    for (std::size_t j : b) {
      double v = d[i][j];
      if (linkage == BruteLinkage::single) {
        best = std::min(best, v);
      } else if (linkage == BruteLinkage::complete) {
        best = std::max(best, v);
      } else {
        sum += v;
      }
    }
  }
  if (linkage == BruteLinkage::average) {
    return sum / double(a.size() * b.size());
  }
  return best;
}

struct BruteCluster {
  std::size_t node;
  std::vector<std::size_t> members;
};

inline std::vector<BruteMerge> brute_agglomerate(
    const std::vector<std::vector<double>>& d, BruteLinkage linkage) {
  const std::size_t n = d.size();
  std::vector<BruteCluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}});

  std::vector<BruteMerge> merges;
  std::size_t next_node = n;
  while (active.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_ids{0, 0};
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        double v = brute_cluster_distance(d, active[i].members,
                                          active[j].members, linkage);
        auto ids = std::minmax(active[i].node, active[j].node);
        std::pair<std::size_t, std::size_t> id_pair{ids.first, ids.second};
        if (v < best || (v == best && id_pair < best_ids)) {
          best = v;
          best_ids = id_pair;
          bi = i;
          bj = j;
        }
      }
    }
    merges.push_back({best_ids.first, best_ids.second, best});
    BruteCluster merged;
    merged.node = next_node++;
    merged.members = active[bi].members;
    merged.members.insert(merged.members.end(), active[bj].members.begin(),
                          active[bj].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    active.erase(active.begin() + std::ptrdiff_t(bj));
    active.erase(active.begin() + std::ptrdiff_t(bi));
    active.push_back(std::move(merged));
  }
  return merges;
}

// Partition of leaves 0..n-1 after applying every merge with height < d_th,
// replayed over explicit member sets. Canonical form: sorted list of sorted
// member lists.
inline std::vector<std::vector<std::size_t>> brute_partition(
    const std::vector<BruteMerge>& merges, std::size_t n_leaves, double d_th) {
  std::map<std::size_t, std::vector<std::size_t>> parts;
  for (std::size_t i = 0; i < n_leaves; ++i) parts[i] = {i};
  std::size_t next_node = n_leaves;
  for (const BruteMerge& m : merges) {
    std::size_t id = next_node++;
    if (m.height < d_th && parts.count(m.left) && parts.count(m.right)) {
      std::vector<std::size_t> u = parts[m.left];
      u.insert(u.end(), parts[m.right].begin(), parts[m.right].end());
      std::sort(u.begin(), u.end());
      parts.erase(m.left);
      parts.erase(m.right);
      parts[id] = std::move(u);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [id, members] : parts) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

// Kruskal's MST (the library uses Prim's): sorted edge weights.
inline std::vector<double> kruskal_mst_weights(
    const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  struct Edge {
    double w;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({d[i][j], i, j});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.w < b.w; });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<double> weights;
  for (const Edge& e : edges) {
    std::size_t a = find(e.i), b = find(e.j);
    if (a == b) continue;
    parent[a] = b;
    weights.push_back(e.w);
    if (weights.size() == n - 1) break;
  }
  std::sort(weights.begin(), weights.end());
  return weights;
}

// Rand index between two flat labelings of the same items: fraction of item
// pairs on which the labelings agree (together in both or apart in both).
inline double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++total;
      bool same_a = a[i] == a[j];
      bool same_b = b[i] == b[j];
      if (same_a == same_b) ++agree;
    }
  }
  return double(agree) / double(total);
}

inline std::vector<std::vector<double>> random_symmetric(std::size_t n,
                                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = u(rng);
  }
  return d;
}

inline std::vector<double> random_sample(std::size_t n, std::mt19937_64& rng,
                                         double sigma = 1.0) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> out(n);
  for (double& x : out) x = g(rng);
  return out;
}

}  // namespace oracles

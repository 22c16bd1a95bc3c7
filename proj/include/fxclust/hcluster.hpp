#pragma once

#include <map>
#include <string>
#include <vector>

#include "fxclust/metrics.hpp"

namespace fxclust {

enum class Linkage { single, complete, average };

const char* to_string(Linkage l);
Linkage linkage_from_string(const std::string& s);

// Binary merge tree over N leaves. Node ids 0..N-1 are leaves; the k-th merge
// creates node N+k. Heights are the linkage function values; for single,
// complete and average linkage they are non-decreasing in merge order.
struct Merge {
  std::size_t left;
  std::size_t right;
  double height;
};

struct Dendrogram {
  std::vector<std::string> labels;
  std::vector<Merge> merges;

  std::size_t n_leaves() const { return labels.size(); }
  double max_height() const;

  // Leaf ids in left-to-right display order (depth-first from the root).
  std::vector<std::size_t> leaf_order() const;

  std::string to_newick() const;
  std::string to_json() const;
  static Dendrogram from_json(const std::string& text);
};

// Flat partition from cutting a dendrogram: merges with height < d_th
// (strict) are applied. Cluster ids are consecutive from 0 in order of each
// cluster's first leaf.
struct ClusterCut {
  double threshold;
  std::map<std::string, int> assignment;
  std::size_t n_clusters_ge2;
  std::size_t n_isolated;

  std::size_t n_clusters() const { return n_clusters_ge2 + n_isolated; }
  void write_csv(std::ostream& out) const;
};

// Agglomerative clustering by repeated nearest-pair merging with the
// Lance-Williams distance update. Ties on the minimal distance merge the
// lexicographically smallest (node id, node id) pair.
Dendrogram agglomerate(const DistanceMatrix& dm, Linkage linkage);

ClusterCut cut(const Dendrogram& dg, double d_th);

// Sweeps the midpoints between consecutive distinct merge heights (plus one
// candidate above the top) and keeps the threshold maximizing the number of
// clusters with >= 2 members; ties go to the smallest threshold. Set
// count_singletons to maximize the total number of parts instead.
struct BestThreshold {
  double d_th;
  ClusterCut cut;
};
BestThreshold best_threshold(const Dendrogram& dg,
                             bool count_singletons = false);

// Entry (i,j) = height of the merge where leaves i and j first share a
// cluster.
DistanceMatrix cophenetic_matrix(const Dendrogram& dg);

// Cophenetic distance correlation coefficient: Pearson correlation between
// the N(N-1)/2 cophenetic distances of two dendrograms over the same labels
// (order may differ).
double cdcc(const Dendrogram& a, const Dendrogram& b);

// Checks the single-linkage/minimum-spanning-tree identity: the sorted MST
// edge weights of the matrix must equal the sorted single-linkage merge
// heights. The MST comes from an independent Prim construction.
struct MstReport {
  bool pass;
  double max_discrepancy;
  std::vector<double> mst_weights;       // sorted
  std::vector<double> linkage_heights;   // sorted
};
MstReport mst_check(const DistanceMatrix& dm, double tolerance = 1e-12);

}  // namespace fxclust

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfcnet/rng.hpp"

namespace mfcnet {

// Simple undirected graph; adjacency lists are sorted and self-loop free.
struct Graph {
  std::vector<std::vector<int32_t>> adj;
  int64_t edges = 0;

  int32_t n() const { return static_cast<int32_t>(adj.size()); }
  int32_t degree(int32_t i) const { return static_cast<int32_t>(adj[i].size()); }
  std::vector<int64_t> degree_sequence() const {
    std::vector<int64_t> d(adj.size());
    for (size_t i = 0; i < adj.size(); ++i) d[i] = static_cast<int64_t>(adj[i].size());
    return d;
  }
};

// Chung-Lu sample: pair {i, j} is an edge with probability
// min(1, w_i * w_j / sum(w)), independently. Weight-sorted skipping sampler,
// expected O(n + m); per-pair probabilities are exact.
Graph sample_chung_lu(const std::vector<double>& weights, uint64_t seed);

// Whitespace-separated edge list. Lines starting with '%' or '#' are
// comments; the first two fields of a data line are integer node ids and any
// further fields are ignored. Node ids are compacted to 0..n-1 in order of
// first appearance; repeated edges collapse and self-loops are dropped.
Graph load_edge_list(const std::string& path);

// One "u v" line per edge with u < v, ordered; comments are not preserved.
void save_edge_list(const Graph& g, const std::string& path);

// label[i]: 0 for isolated nodes, the degree itself for 1..k_cutoff, and
// k_cutoff + 1 for everything above the cutoff.
struct ClassPartition {
  int k_cutoff = 0;
  std::vector<int32_t> label;
  std::vector<int64_t> counts;  // per class slot 0..k_cutoff (tail last)
  int64_t isolated = 0;

  // Class slot in 0..k_cutoff for ensemble indexing, -1 for isolated nodes.
  int slot(int32_t node) const { return label[node] - 1; }
  int64_t active_nodes() const {
    return static_cast<int64_t>(label.size()) - isolated;
  }
};

ClassPartition partition_classes(const Graph& g, int k_cutoff);

}  // namespace mfcnet

#include "mfcnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace mfcnet {

Graph sample_chung_lu(const std::vector<double>& weights, uint64_t seed) {
  const int64_t n = static_cast<int64_t>(weights.size());
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("sample_chung_lu: negative weight");
    if (!std::isfinite(w)) throw std::invalid_argument("sample_chung_lu: non-finite weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("sample_chung_lu: all weights are zero");
  if (n > (int64_t{1} << 31) - 1) throw std::invalid_argument("sample_chung_lu: too many nodes");

  // Sort by weight descending (ties by index) so that w[order[j]] is
  // nonincreasing; then the classic skipping walk visits each pair once with
  // an upper bound p that is tightened to the exact q before acceptance.
  std::vector<int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });

  Rng rng(seed);
  std::vector<std::pair<int32_t, int32_t>> edge_buf;
  for (int64_t i = 0; i + 1 < n; ++i) {
    const double wi = weights[order[i]];
    if (wi <= 0.0) break;
    int64_t j = i + 1;
    double p = std::min(1.0, wi * weights[order[j]] / total);
    while (j < n && p > 0.0) {
      if (p < 1.0) {
        double r = rng.uniform();
        // skip a Geometric(p) number of candidates
        j += static_cast<int64_t>(std::floor(std::log1p(-r) / std::log1p(-p)));
      }
      if (j >= n) break;
      double q = std::min(1.0, wi * weights[order[j]] / total);
      if (rng.uniform() < q / p) edge_buf.emplace_back(order[i], order[j]);
      p = q;
      ++j;
    }
  }

  Graph g;
  g.adj.resize(n);
  g.edges = static_cast<int64_t>(edge_buf.size());
  for (auto [u, v] : edge_buf) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

namespace {

bool parse_int_token(const char*& s, int64_t& out) {
  while (*s == ' ' || *s == '\t' || *s == '\r') ++s;
  if (*s == '\0' || *s == '\n') return false;
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s, &end, 10);
  if (end == s || errno == ERANGE) return false;
  if (*end != '\0' && *end != ' ' && *end != '\t' && *end != '\r' && *end != '\n') return false;
  s = end;
  out = v;
  return true;
}

}  // namespace

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);

  std::unordered_map<int64_t, int32_t> id_map;
  std::vector<std::pair<int32_t, int32_t>> edges;
  auto intern = [&](int64_t id) -> int32_t {
    auto [it, fresh] = id_map.emplace(id, static_cast<int32_t>(id_map.size()));
    (void)fresh;
    return it->second;
  };

  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const char* s = line.c_str();
    while (*s == ' ' || *s == '\t' || *s == '\r') ++s;
    if (*s == '\0' || *s == '%' || *s == '#') continue;
    int64_t a, b;
    if (!parse_int_token(s, a) || !parse_int_token(s, b))
      throw std::runtime_error("load_edge_list: " + path + ": line " +
                               std::to_string(line_no) + ": expected two integer node ids");
    int32_t u = intern(a);
    int32_t v = intern(b);
    if (u == v) continue;  // self-loop dropped, node id still interned
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  if (id_map.empty())
    throw std::runtime_error("load_edge_list: " + path + ": no edges found");

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.adj.resize(id_map.size());
  g.edges = static_cast<int64_t>(edges.size());
  for (auto [u, v] : edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_edge_list: cannot open " + path);
  for (int32_t u = 0; u < g.n(); ++u)
    for (int32_t v : g.adj[u])
      if (u < v) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("save_edge_list: write failed for " + path);
}

ClassPartition partition_classes(const Graph& g, int k_cutoff) {
  if (k_cutoff < 1) throw std::invalid_argument("partition_classes: cutoff must be >= 1");
  ClassPartition p;
  p.k_cutoff = k_cutoff;
  p.label.resize(g.n());
  p.counts.assign(k_cutoff + 1, 0);
  for (int32_t i = 0; i < g.n(); ++i) {
    int32_t d = g.degree(i);
    if (d == 0) {
      p.label[i] = 0;
      ++p.isolated;
    } else if (d <= k_cutoff) {
      p.label[i] = d;
      ++p.counts[d - 1];
    } else {
      p.label[i] = k_cutoff + 1;
      ++p.counts[k_cutoff];
    }
  }
  return p;
}

}  // namespace mfcnet

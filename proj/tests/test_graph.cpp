#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mfcnet/degree.hpp"
#include "mfcnet/graph.hpp"
#include "oracles.hpp"

using namespace mfcnet;

namespace {

std::vector<double> draw_weights(int n, uint64_t seed) {
  auto dist = DegreeDistribution::power_law(2.5);
  Rng rng(seed);
  std::vector<double> w(n);
  for (auto& x : w) x = static_cast<double>(dist.sample(rng));
  return w;
}

std::string write_temp(const std::string& contents) {
  std::string path = std::string("edge_list_test_") + std::to_string(::getpid()) + ".txt";
  std::ofstream out(path);
  out << contents;
  return path;
}

void check_simple_undirected(const Graph& g) {
  int64_t half_edges = 0;
  for (int32_t i = 0; i < g.n(); ++i) {
    const auto& nb = g.adj[i];
    for (size_t a = 0; a < nb.size(); ++a) {
      CHECK(nb[a] != i);
      if (a > 0) CHECK(nb[a] > nb[a - 1]);  // sorted, no duplicates
      bool back = std::binary_search(g.adj[nb[a]].begin(), g.adj[nb[a]].end(), i);
      CHECK(back);
    }
    half_edges += static_cast<int64_t>(nb.size());
  }
  CHECK(half_edges == 2 * g.edges);
}

}  // namespace

TEST_CASE("chung-lu sampling is deterministic and validates input") {
  auto w = draw_weights(400, 11);
  Graph a = sample_chung_lu(w, 5);
  Graph b = sample_chung_lu(w, 5);
  CHECK(a.adj == b.adj);
  Graph c = sample_chung_lu(w, 6);
  CHECK(a.adj != c.adj);

  std::vector<double> zeros(10, 0.0);
  CHECK_THROWS_AS(sample_chung_lu(zeros, 1), std::invalid_argument);
  std::vector<double> neg = {1.0, -2.0, 1.0};
  CHECK_THROWS_AS(sample_chung_lu(neg, 1), std::invalid_argument);
}

TEST_CASE("sampled graphs are simple and undirected") {
  auto w = draw_weights(200, 3);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = sample_chung_lu(w, seed);
    check_simple_undirected(g);
  }
}

TEST_CASE("edge count concentrates on the pairwise expectation") {
  auto w = draw_weights(300, 7);
  double expected = oracle::mean_and_expected_edges(w);
  const int seeds = 100;
  std::vector<double> counts(seeds);
  double mean = 0.0;
  for (int s = 0; s < seeds; ++s) {
    counts[s] = static_cast<double>(sample_chung_lu(w, 1000 + s).edges);
    mean += counts[s];
  }
  mean /= seeds;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  double se = std::sqrt(var / (seeds - 1) / seeds);
  CHECK(std::abs(mean - expected) < 4 * se);
}

TEST_CASE("skipping sampler agrees with the naive per-pair sampler") {
  auto w = draw_weights(2000, 21);
  const int seeds = 50;
  std::vector<double> fast_md(seeds), naive_md(seeds);
  for (int s = 0; s < seeds; ++s) {
    Graph g = sample_chung_lu(w, 40 + s);
    fast_md[s] = 2.0 * static_cast<double>(g.edges) / g.n();
    Rng rng(9000 + s);
    auto ng = oracle::naive_chung_lu(w, rng);
    int64_t half = 0;
    for (auto& a : ng.adj) half += static_cast<int64_t>(a.size());
    naive_md[s] = static_cast<double>(half) / static_cast<double>(ng.adj.size());
  }
  auto mean_sd = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    return std::pair<double, double>(m, std::sqrt(var / (v.size() - 1)));
  };
  auto [fm, fs] = mean_sd(fast_md);
  auto [nm, ns] = mean_sd(naive_md);
  double se = std::sqrt(fs * fs / seeds + ns * ns / seeds);
  CHECK(std::abs(fm - nm) < 3 * se);
}

TEST_CASE("edge list parsing") {
  std::string path = write_temp(
      "% comment header\n"
      "# another comment\n"
      "\n"
      "10 20 1.5 123456\n"
      "20 10\n"
      "10 10\n"
      "  30\t10  \n"
      "40 40\n");
  Graph g = load_edge_list(path);
  // ids compacted in first-appearance order: 10->0, 20->1, 30->2, 40->3.
  REQUIRE(g.n() == 4);
  CHECK(g.edges == 2);
  CHECK(g.adj[0] == std::vector<int32_t>({1, 2}));
  CHECK(g.adj[1] == std::vector<int32_t>({0}));
  CHECK(g.adj[2] == std::vector<int32_t>({0}));
  CHECK(g.adj[3].empty());  // only a self-loop: kept as an isolated node
  std::remove(path.c_str());
}

TEST_CASE("edge list parse errors carry the line number") {
  std::string path = write_temp("1 2\nnot numbers here\n");
  try {
    load_edge_list(path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::remove(path.c_str());

  std::string path2 = write_temp("7\n");
  CHECK_THROWS_AS(load_edge_list(path2), std::runtime_error);
  std::remove(path2.c_str());

  std::string path3 = write_temp("% nothing but comments\n");
  CHECK_THROWS_AS(load_edge_list(path3), std::runtime_error);
  std::remove(path3.c_str());

  CHECK_THROWS_AS(load_edge_list("no_such_file_anywhere.txt"), std::runtime_error);
}

TEST_CASE("serialization is idempotent") {
  std::string path = write_temp("5 9\n9 5\n12 5\n% tail comment\n9 12\n");
  Graph g = load_edge_list(path);
  std::string out1 = path + ".out1";
  std::string out2 = path + ".out2";
  save_edge_list(g, out1);
  Graph g2 = load_edge_list(out1);
  save_edge_list(g2, out2);
  std::ifstream f1(out1), f2(out2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
  // every line "u v" with u < v
  std::istringstream lines(s1.str());
  int32_t u, v;
  while (lines >> u >> v) CHECK(u < v);
  std::remove(path.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("class partition labels") {
  // path 0-1-2 plus isolated node 3
  std::string path = write_temp("0 1\n1 2\n3 3\n");
  Graph g = load_edge_list(path);
  std::remove(path.c_str());
  ClassPartition p = partition_classes(g, 1);
  REQUIRE(p.label.size() == 4);
  CHECK(p.label[0] == 1);
  CHECK(p.label[1] == 2);  // degree 2 > cutoff 1: tail label
  CHECK(p.label[2] == 1);
  CHECK(p.label[3] == 0);  // isolated
  CHECK(p.isolated == 1);
  CHECK(p.counts == std::vector<int64_t>({2, 1}));

  ClassPartition q = partition_classes(g, 5);
  CHECK(q.label[1] == 2);
  CHECK(q.counts == std::vector<int64_t>({2, 1, 0, 0, 0, 0}));
}

TEST_CASE("partition fractions agree with the naive sampler") {
  auto w = draw_weights(1200, 33);
  const int seeds = 30, kc = 10;
  std::vector<double> frac_fast(seeds), frac_naive(seeds);
  for (int s = 0; s < seeds; ++s) {
    Graph g = sample_chung_lu(w, 600 + s);
    ClassPartition p = partition_classes(g, kc);
    int64_t low = 0;
    for (int c = 0; c < kc; ++c) low += p.counts[c];
    frac_fast[s] = static_cast<double>(low) / g.n();
    Rng rng(7100 + s);
    auto ng = oracle::naive_chung_lu(w, rng);
    int64_t nlow = 0;
    for (auto& a : ng.adj) nlow += (!a.empty() && static_cast<int>(a.size()) <= kc);
    frac_naive[s] = static_cast<double>(nlow) / static_cast<double>(ng.adj.size());
  }
  auto mean_sd = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    return std::pair<double, double>(m, std::sqrt(var / (v.size() - 1)));
  };
  auto [fm, fs] = mean_sd(frac_fast);
  auto [nm, ns] = mean_sd(frac_naive);
  double se = std::sqrt(fs * fs / seeds + ns * ns / seeds);
  CHECK(std::abs(fm - nm) < 3 * se);
}

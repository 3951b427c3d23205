#pragma once

// Independent reference implementations used only by tests. Everything here
// is written the slow, obvious way on purpose so it can disagree with the
// library when the library is wrong.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracle {

// Direct series for zeta(s): long double summation from M down to 1 plus the
// integral bracket for the tail. Returns the bracket midpoint; half-width is
// the error bound (< 1e-12 for s >= 1.5 at M = 1e7).
inline long double zeta_series(long double s, int64_t m = 10'000'000) {
  long double sum = 0.0L;
  for (int64_t j = m; j >= 1; --j) sum += powl(static_cast<long double>(j), -s);
  long double lo = powl(static_cast<long double>(m) + 1.0L, 1.0L - s) / (s - 1.0L);
  long double hi = powl(static_cast<long double>(m), 1.0L - s) / (s - 1.0L);
  return sum + (lo + hi) / 2.0L;
}

// All length-d nonnegative integer vectors summing to k, recursively.
inline std::vector<std::vector<int>> compositions(int k, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (d > 0) rec(0, k);
  return out;
}

inline long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline long double multinomial_coeff(const std::vector<int>& c) {
  int k = 0;
  for (int x : c) k += x;
  long double v = factorial(k);
  for (int x : c) v /= factorial(x);
  return v;
}

inline long double multinomial_pmf(const std::vector<int>& c,
                                   const std::vector<double>& p) {
  long double v = multinomial_coeff(c);
  for (size_t i = 0; i < c.size(); ++i) {
    for (int j = 0; j < c[i]; ++j) v *= static_cast<long double>(p[i]);
  }
  return v;
}

// Chung-Lu by flipping every pair individually.
struct NaiveGraph {
  std::vector<std::set<int>> adj;
};

template <typename Rng>
inline NaiveGraph naive_chung_lu(const std::vector<double>& w, Rng& rng) {
  int n = static_cast<int>(w.size());
  double total = 0.0;
  for (double x : w) total += x;
  NaiveGraph g;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = std::min(1.0, w[i] * w[j] / total);
      if (rng.uniform() < p) {
        g.adj[i].insert(j);
        g.adj[j].insert(i);
      }
    }
  }
  return g;
}

inline double mean_and_expected_edges(const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  double e = 0.0;
  for (size_t i = 0; i < w.size(); ++i)
    for (size_t j = i + 1; j < w.size(); ++j)
      e += std::min(1.0, w[i] * w[j] / total);
  return e;
}

}  // namespace oracle

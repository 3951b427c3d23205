#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfcnet/rng.hpp"

namespace mfcnet {

// Riemann zeta on (1, inf) by truncated series plus an Euler-Maclaurin tail;
// absolute error is far below 1e-10 for s >= 1.1 at the default truncation.
double zeta_function(double s, int64_t truncation = 1'000'000);

struct ClassMasses {
  // Both vectors have k_cutoff + 1 entries; the last pools degrees above the
  // cutoff. node[c] weighs a uniformly random node, neighbor[c] the degree of
  // the node at the end of a uniformly random edge (size-biased law).
  std::vector<double> node;
  std::vector<double> neighbor;
};

// Degree law on {1, 2, ...}. Degree-zero nodes never enter the law itself;
// empirical construction counts them separately in isolated_count.
class DegreeDistribution {
 public:
  // P(k) = k^-gamma / zeta(gamma), gamma > 2 so the mean is finite.
  static DegreeDistribution power_law(double gamma, int64_t truncation = 1'000'000);
  // Explicit finite support; keys must be >= 1, values nonnegative, sum ~ 1.
  static DegreeDistribution explicit_pmf(const std::map<int, double>& pmf);
  // Empirical law of a degree sequence; zeros are excluded and counted.
  static DegreeDistribution empirical(std::span<const int64_t> degrees);

  double pmf(int64_t k) const;
  double cdf(int64_t k) const;  // P(degree <= k)
  double mean() const { return mean_; }

  // Size-biased law k * P(k) / E[degree] of the degree at the end of an edge.
  double neighbor_pmf(int64_t k) const;
  double neighbor_cdf(int64_t k) const;

  // E[degree | degree > k_cutoff]; throws if the tail has zero mass.
  double tail_mean(int k_cutoff) const;

  ClassMasses class_masses(int k_cutoff) const;

  // One draw by inverse-cdf walk; for the power law the walk is clamped at
  // the truncation point (residual mass ~ truncation^(1-gamma)).
  int64_t sample(Rng& rng) const;

  int64_t max_degree() const { return max_degree_; }
  int64_t isolated_count() const { return isolated_count_; }

 private:
  DegreeDistribution() = default;

  enum class Kind { PowerLaw, Table } kind_ = Kind::Table;
  double gamma_ = 0.0;
  double zeta_g_ = 0.0;    // zeta(gamma)
  double zeta_g1_ = 0.0;   // zeta(gamma - 1)
  int64_t truncation_ = 0;
  // Table kinds: probabilities indexed by degree, entry 0 unused.
  std::vector<double> table_;
  double mean_ = 0.0;
  int64_t max_degree_ = 0;
  int64_t isolated_count_ = 0;
};

}  // namespace mfcnet

#include "mfcnet/degree.hpp"

#include <algorithm>
#include <cmath>

namespace mfcnet {

namespace {

// Kahan-compensated sum of j^-s for j in [1, m], descending so the small
// terms accumulate first.
double power_sum(double s, int64_t m) {
  double sum = 0.0, comp = 0.0;
  for (int64_t j = m; j >= 1; --j) {
    double term = std::pow(static_cast<double>(j), -s) - comp;
    double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

// Euler-Maclaurin estimate of sum_{j>=a} j^-s; error ~ a^-(s+5).
double em_tail(double a, double s) {
  double t = std::pow(a, 1.0 - s) / (s - 1.0);
  t += 0.5 * std::pow(a, -s);
  t += s * std::pow(a, -s - 1.0) / 12.0;
  t -= s * (s + 1.0) * (s + 2.0) * std::pow(a, -s - 3.0) / 720.0;
  return t;
}

}  // namespace

double zeta_function(double s, int64_t truncation) {
  if (!(s > 1.0)) throw std::invalid_argument("zeta_function: need s > 1");
  if (truncation < 100) throw std::invalid_argument("zeta_function: truncation too small");
  return power_sum(s, truncation) + em_tail(static_cast<double>(truncation) + 1.0, s);
}

DegreeDistribution DegreeDistribution::power_law(double gamma, int64_t truncation) {
  if (!(gamma > 2.0))
    throw std::invalid_argument("power_law: exponent must exceed 2 for a finite mean degree");
  DegreeDistribution d;
  d.kind_ = Kind::PowerLaw;
  d.gamma_ = gamma;
  d.truncation_ = truncation;
  d.zeta_g_ = zeta_function(gamma, truncation);
  d.zeta_g1_ = zeta_function(gamma - 1.0, truncation);
  d.mean_ = d.zeta_g1_ / d.zeta_g_;
  d.max_degree_ = truncation;
  return d;
}

DegreeDistribution DegreeDistribution::explicit_pmf(const std::map<int, double>& pmf) {
  if (pmf.empty()) throw std::invalid_argument("explicit_pmf: empty table");
  double sum = 0.0;
  int max_k = 0;
  for (auto [k, p] : pmf) {
    if (k < 1) throw std::invalid_argument("explicit_pmf: degrees must be >= 1");
    if (p < 0.0) throw std::invalid_argument("explicit_pmf: negative probability");
    sum += p;
    max_k = std::max(max_k, k);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("explicit_pmf: probabilities must sum to 1 within 1e-9");
  DegreeDistribution d;
  d.kind_ = Kind::Table;
  d.table_.assign(max_k + 1, 0.0);
  for (auto [k, p] : pmf) d.table_[k] = p / sum;
  d.max_degree_ = max_k;
  double mean = 0.0;
  for (int k = 1; k <= max_k; ++k) mean += k * d.table_[k];
  if (mean <= 0.0) throw std::invalid_argument("explicit_pmf: zero mean degree");
  d.mean_ = mean;
  return d;
}

DegreeDistribution DegreeDistribution::empirical(std::span<const int64_t> degrees) {
  int64_t max_k = 0, zeros = 0, count = 0;
  for (int64_t k : degrees) {
    if (k < 0) throw std::invalid_argument("empirical: negative degree");
    if (k == 0) {
      ++zeros;
      continue;
    }
    max_k = std::max(max_k, k);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("empirical: no nodes of positive degree");
  DegreeDistribution d;
  d.kind_ = Kind::Table;
  d.table_.assign(max_k + 1, 0.0);
  for (int64_t k : degrees)
    if (k > 0) d.table_[k] += 1.0;
  double mean = 0.0;
  for (int64_t k = 1; k <= max_k; ++k) {
    d.table_[k] /= static_cast<double>(count);
    mean += static_cast<double>(k) * d.table_[k];
  }
  d.mean_ = mean;
  d.max_degree_ = max_k;
  d.isolated_count_ = zeros;
  return d;
}

double DegreeDistribution::pmf(int64_t k) const {
  if (k < 1) return 0.0;
  if (kind_ == Kind::PowerLaw) return std::pow(static_cast<double>(k), -gamma_) / zeta_g_;
  if (k > max_degree_) return 0.0;
  return table_[k];
}

double DegreeDistribution::cdf(int64_t k) const {
  if (k < 1) return 0.0;
  if (kind_ == Kind::PowerLaw) {
    if (k >= truncation_)
      return 1.0 - em_tail(static_cast<double>(k) + 1.0, gamma_) / zeta_g_;
    return power_sum(gamma_, k) / zeta_g_;
  }
  double s = 0.0;
  for (int64_t j = 1; j <= std::min(k, max_degree_); ++j) s += table_[j];
  return s;
}

double DegreeDistribution::neighbor_pmf(int64_t k) const {
  return static_cast<double>(k) * pmf(k) / mean_;
}

double DegreeDistribution::neighbor_cdf(int64_t k) const {
  if (k < 1) return 0.0;
  if (kind_ == Kind::PowerLaw) {
    if (k >= truncation_)
      return 1.0 - em_tail(static_cast<double>(k) + 1.0, gamma_ - 1.0) / zeta_g1_;
    return power_sum(gamma_ - 1.0, k) / zeta_g1_;
  }
  double s = 0.0;
  for (int64_t j = 1; j <= std::min(k, max_degree_); ++j)
    s += static_cast<double>(j) * table_[j];
  return s / mean_;
}

double DegreeDistribution::tail_mean(int k_cutoff) const {
  double num, den;
  if (kind_ == Kind::PowerLaw) {
    num = zeta_g1_ - power_sum(gamma_ - 1.0, k_cutoff);
    den = zeta_g_ - power_sum(gamma_, k_cutoff);
  } else {
    num = den = 0.0;
    for (int64_t k = k_cutoff + 1; k <= max_degree_; ++k) {
      num += static_cast<double>(k) * table_[k];
      den += table_[k];
    }
  }
  if (den <= 1e-300) throw std::invalid_argument("tail_mean: no mass above the cutoff");
  return num / den;
}

ClassMasses DegreeDistribution::class_masses(int k_cutoff) const {
  if (k_cutoff < 1) throw std::invalid_argument("class_masses: cutoff must be >= 1");
  ClassMasses cm;
  cm.node.resize(k_cutoff + 1);
  cm.neighbor.resize(k_cutoff + 1);
  double node_acc = 0.0, nb_acc = 0.0;
  for (int c = 0; c < k_cutoff; ++c) {
    cm.node[c] = pmf(c + 1);
    cm.neighbor[c] = neighbor_pmf(c + 1);
    node_acc += cm.node[c];
    nb_acc += cm.neighbor[c];
  }
  cm.node[k_cutoff] = std::max(0.0, 1.0 - node_acc);
  cm.neighbor[k_cutoff] = std::max(0.0, 1.0 - nb_acc);
  return cm;
}

int64_t DegreeDistribution::sample(Rng& rng) const {
  double u = rng.uniform();
  double acc = 0.0;
  if (kind_ == Kind::PowerLaw) {
    for (int64_t k = 1; k < truncation_; ++k) {
      acc += pmf(k);
      if (u < acc) return k;
    }
    return truncation_;
  }
  for (int64_t k = 1; k < max_degree_; ++k) {
    acc += table_[k];
    if (u < acc) return k;
  }
  return max_degree_;
}

}  // namespace mfcnet

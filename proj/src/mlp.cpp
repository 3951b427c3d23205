#include "mfcnet/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "mfcnet/rng.hpp"

namespace mfcnet {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274;  // log(2*pi) / 2

}  // namespace

Mlp::Mlp(int in, int out, int hidden, uint64_t seed) : in_(in), out_(out), hidden_(hidden) {
  if (in < 1 || out < 1 || hidden < 1) throw std::invalid_argument("Mlp: dimensions must be positive");
  w_.resize(static_cast<size_t>(hidden) * in + hidden + static_cast<size_t>(hidden) * hidden +
            hidden + static_cast<size_t>(out) * hidden + out);
  Rng rng(seed);
  size_t at = 0;
  auto glorot = [&](int fan_in, int fan_out, size_t n_weights, size_t n_bias) {
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (size_t i = 0; i < n_weights; ++i) w_[at++] = (2.0 * rng.uniform() - 1.0) * bound;
    for (size_t i = 0; i < n_bias; ++i) w_[at++] = 0.0;
  };
  glorot(in, hidden, static_cast<size_t>(hidden) * in, hidden);
  glorot(hidden, hidden, static_cast<size_t>(hidden) * hidden, hidden);
  glorot(hidden, out, static_cast<size_t>(out) * hidden, out);
  a1_.resize(hidden);
  a2_.resize(hidden);
}

void Mlp::forward(std::span<const double> x, std::span<double> out) {
  if (static_cast<int>(x.size()) != in_ || static_cast<int>(out.size()) != out_)
    throw std::invalid_argument("Mlp::forward: dimension mismatch");
  x_.assign(x.begin(), x.end());
  const double* w1 = w_.data();
  const double* b1 = w1 + static_cast<size_t>(hidden_) * in_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + static_cast<size_t>(hidden_) * hidden_;
  const double* w3 = b2 + hidden_;
  const double* b3 = w3 + static_cast<size_t>(out_) * hidden_;

  for (int h = 0; h < hidden_; ++h) {
    double s = b1[h];
    const double* row = w1 + static_cast<size_t>(h) * in_;
    for (int i = 0; i < in_; ++i) s += row[i] * x_[i];
    a1_[h] = std::tanh(s);
  }
  for (int h = 0; h < hidden_; ++h) {
    double s = b2[h];
    const double* row = w2 + static_cast<size_t>(h) * hidden_;
    for (int i = 0; i < hidden_; ++i) s += row[i] * a1_[i];
    a2_[h] = std::tanh(s);
  }
  for (int o = 0; o < out_; ++o) {
    double s = b3[o];
    const double* row = w3 + static_cast<size_t>(o) * hidden_;
    for (int i = 0; i < hidden_; ++i) s += row[i] * a2_[i];
    out[o] = s;
  }
}

void Mlp::backward(std::span<const double> dout, std::span<double> grad) const {
  if (static_cast<int>(dout.size()) != out_ || grad.size() != w_.size())
    throw std::invalid_argument("Mlp::backward: dimension mismatch");
  const size_t o1 = 0;
  const size_t ob1 = o1 + static_cast<size_t>(hidden_) * in_;
  const size_t o2 = ob1 + hidden_;
  const size_t ob2 = o2 + static_cast<size_t>(hidden_) * hidden_;
  const size_t o3 = ob2 + hidden_;
  const size_t ob3 = o3 + static_cast<size_t>(out_) * hidden_;
  const double* w2 = w_.data() + o2;
  const double* w3 = w_.data() + o3;

  std::vector<double> da2(hidden_, 0.0), dz2(hidden_), da1(hidden_, 0.0), dz1(hidden_);
  for (int o = 0; o < out_; ++o) {
    double d = dout[o];
    if (d == 0.0) continue;
    double* grow = grad.data() + o3 + static_cast<size_t>(o) * hidden_;
    const double* wrow = w3 + static_cast<size_t>(o) * hidden_;
    for (int i = 0; i < hidden_; ++i) {
      grow[i] += d * a2_[i];
      da2[i] += d * wrow[i];
    }
    grad[ob3 + o] += d;
  }
  for (int h = 0; h < hidden_; ++h) dz2[h] = da2[h] * (1.0 - a2_[h] * a2_[h]);
  for (int h = 0; h < hidden_; ++h) {
    double d = dz2[h];
    if (d == 0.0) continue;
    double* grow = grad.data() + o2 + static_cast<size_t>(h) * hidden_;
    const double* wrow = w2 + static_cast<size_t>(h) * hidden_;
    for (int i = 0; i < hidden_; ++i) {
      grow[i] += d * a1_[i];
      da1[i] += d * wrow[i];
    }
    grad[ob2 + h] += d;
  }
  for (int h = 0; h < hidden_; ++h) dz1[h] = da1[h] * (1.0 - a1_[h] * a1_[h]);
  for (int h = 0; h < hidden_; ++h) {
    double d = dz1[h];
    if (d == 0.0) continue;
    double* grow = grad.data() + o1 + static_cast<size_t>(h) * in_;
    for (int i = 0; i < in_; ++i) grow[i] += d * x_[i];
    grad[ob1 + h] += d;
  }
}

void AdamState::update(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m.size() || grad.size() != m.size())
    throw std::invalid_argument("AdamState::update: dimension mismatch");
  ++step;
  double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    params[i] -= learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon);
  }
}

double gaussian_log_prob(std::span<const double> a, std::span<const double> mean,
                         std::span<const double> log_std) {
  double lp = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double s = std::exp(log_std[i]);
    double z = (a[i] - mean[i]) / s;
    lp += -0.5 * z * z - log_std[i] - kHalfLog2Pi;
  }
  return lp;
}

double gaussian_kl(std::span<const double> mean_old, std::span<const double> log_std_old,
                   std::span<const double> mean_new, std::span<const double> log_std_new) {
  double kl = 0.0;
  for (size_t i = 0; i < mean_old.size(); ++i) {
    double so2 = std::exp(2.0 * log_std_old[i]);
    double sn2 = std::exp(2.0 * log_std_new[i]);
    double dm = mean_new[i] - mean_old[i];
    kl += log_std_new[i] - log_std_old[i] + (so2 + dm * dm) / (2.0 * sn2) - 0.5;
  }
  return kl;
}

double gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double ls : log_std) h += ls + kHalfLog2Pi + 0.5;
  return h;
}

}  // namespace mfcnet

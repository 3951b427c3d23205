#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mfcnet {

// Feed-forward net with two tanh hidden layers and a linear output layer.
// forward caches the activations, so each backward must follow its own
// forward; gradients accumulate into the caller's buffer.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int in, int out, int hidden, uint64_t seed);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  int hidden_dim() const { return hidden_; }
  int n_params() const { return static_cast<int>(w_.size()); }
  std::span<double> params() { return w_; }
  std::span<const double> params() const { return w_; }

  void forward(std::span<const double> x, std::span<double> out);
  void backward(std::span<const double> dout, std::span<double> grad) const;

 private:
  int in_ = 0, out_ = 0, hidden_ = 0;
  std::vector<double> w_;
  std::vector<double> x_, a1_, a2_;  // input and post-tanh activations
};

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int64_t step = 0;
  std::vector<double> m, v;

  void init(size_t n, double lr) {
    learning_rate = lr;
    step = 0;
    m.assign(n, 0.0);
    v.assign(n, 0.0);
  }
  void update(std::span<double> params, std::span<const double> grad);
};

double gaussian_log_prob(std::span<const double> a, std::span<const double> mean,
                         std::span<const double> log_std);
double gaussian_kl(std::span<const double> mean_old, std::span<const double> log_std_old,
                   std::span<const double> mean_new, std::span<const double> log_std_new);
double gaussian_entropy(std::span<const double> log_std);

}  // namespace mfcnet

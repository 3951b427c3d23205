#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace mfcnet {

// One SplitMix64 step on a copy of x. Pure; used for seeding and hashing.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_mix(uint64_t a, uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 1)));
}

// xoshiro256++ with explicit state so runs are reproducible bit-for-bit and
// the state can be serialized into checkpoints. No libstdc++ distributions
// are used anywhere; all variates are derived from raw bits below.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state_) {
      s = splitmix64(s);
      w = s;
    }
  }

  // Derives an independent stream for a (seed, a, b) triple, e.g. per node
  // and time step in the particle simulator.
  static Rng stream(uint64_t seed, uint64_t a, uint64_t b) {
    return Rng(hash_mix(hash_mix(seed, a), b));
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via the polar method. Stateless between calls: the spare
  // variate is discarded so serialization is just the engine words.
  double normal() {
    for (;;) {
      double u = 2.0 * uniform() - 1.0;
      double v = 2.0 * uniform() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // Index sampled from an (unnormalized is tolerated) nonnegative weight
  // vector; falls back to the last positive entry on floating-point slack.
  int categorical(std::span<const double> w) {
    double total = 0.0;
    for (double x : w) total += x;
    double u = uniform() * total;
    double acc = 0.0;
    int last = 0;
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) continue;
      acc += w[i];
      last = static_cast<int>(i);
      if (u < acc) return last;
    }
    return last;
  }

  std::array<uint64_t, 4> serialize() const { return state_; }
  void deserialize(const std::array<uint64_t, 4>& s) { state_ = s; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<uint64_t, 4> state_;
};

}  // namespace mfcnet

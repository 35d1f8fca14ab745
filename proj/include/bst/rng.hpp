#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bst/errors.hpp"

namespace bst {

// Counter-friendly 64-bit generator (splitmix64). Chosen over std engines
// so that streams derived from (seed, index) are cheap to construct, which
// keeps sharded simulations independent of the shard layout.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1], safe as a log() argument.
  double uniform_positive() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }
};

/// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  mix.next();
  return mix.next();
}

/// Standard normal variate via Box-Muller.
struct GaussianGen {
  SplitMix64 rng;
  double spare = 0.0;
  bool has_spare = false;

  explicit GaussianGen(std::uint64_t seed) : rng(seed) {}

  double operator()() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double u1 = rng.uniform_positive();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare = r * std::sin(a);
    has_spare = true;
    return r * std::cos(a);
  }
};

/// Poisson variate. Knuth's product method for small means, rounded
/// normal approximation above (same split as Geant4-style samplers).
inline long long poisson(double mean, SplitMix64& rng) {
  if (mean <= 0.0) return 0;
  if (mean < 64.0) {
    const double limit = std::exp(-mean);
    long long k = 0;
    double prod = rng.uniform_positive();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform_positive();
    }
    return k;
  }
  const double u1 = rng.uniform_positive();
  const double u2 = rng.uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  const double v = std::floor(mean + std::sqrt(mean) * z + 0.5);
  return v < 0.0 ? 0 : static_cast<long long>(v);
}

/// Walker alias table for drawing indices from a fixed discrete
/// distribution in O(1) per sample.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw EmptyDistribution("alias table: negative weight");
      total += w;
    }
    if (n == 0 || total <= 0.0) {
      throw EmptyDistribution("alias table: empty or zero-mass distribution");
    }
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back(); small.pop_back();
      const std::size_t l = large.back(); large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] += scaled[s] - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::size_t i : small) prob_[i] = 1.0;
    for (std::size_t i : large) prob_[i] = 1.0;
  }

  std::size_t sample(SplitMix64& rng) const {
    const std::size_t i =
        static_cast<std::size_t>(rng.uniform() * static_cast<double>(prob_.size()));
    const std::size_t idx = i < prob_.size() ? i : prob_.size() - 1;
    return rng.uniform() < prob_[idx] ? idx : alias_[idx];
  }

  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace bst

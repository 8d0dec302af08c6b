// Copyright 2026 The linkrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Deterministic random streams. std::mt19937_64 has a standard-specified
// sequence, so engines seeded from the same keys produce the same draws on
// every platform. The variate transforms (gamma, normal, poisson, ...) are
// written out here instead of using std::*_distribution, whose algorithms
// are implementation-defined.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace linkrev {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Folds a list of keys into one seed; used to derive independent substreams
// from (experiment seed, purpose tag, author, ...) tuples.
inline std::uint64_t stream_seed(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x6c696e6b72657600ULL;  // "linkrev"
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

inline std::mt19937_64 make_stream(std::initializer_list<std::uint64_t> keys) {
  return std::mt19937_64(stream_seed(keys));
}

// Deterministic variate sampler over an mt19937_64 stream.
class Sampler {
 public:
  explicit Sampler(std::mt19937_64 engine) : engine_(engine) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1); safe to pass to log().
  double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Unbiased integer in [0,n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via the Marsaglia polar method (second variate discarded).
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // Gamma(shape, 1) via Marsaglia-Tsang, with the usual boost for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Symmetric Dirichlet over k categories.
  std::vector<double> dirichlet(std::size_t k, double concentration) {
    std::vector<double> out(k);
    double sum = 0.0;
    for (auto& g : out) {
      g = gamma(concentration);
      sum += g;
    }
    for (auto& g : out) g /= sum;
    return out;
  }

  // Index draw from a probability vector (cumulative walk).
  std::size_t categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

  // Knuth's product-of-uniforms method; fine for small lambda.
  std::uint64_t poisson(double lambda) {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Log-normal with the given distribution mean and log-space sigma.
  double lognormal_mean(double mean, double sigma_log) {
    const double mu = std::log(mean) - 0.5 * sigma_log * sigma_log;
    return std::exp(mu + sigma_log * normal());
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  // First k entries of a random permutation of 0..n-1 (without replacement).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace linkrev

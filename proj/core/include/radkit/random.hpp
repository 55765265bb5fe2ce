// Copyright 2026 The RadKit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

namespace radkit {

// 64-bit finalizer used to derive statistically independent child streams
// from a key tuple. Same mixing constants as SplitMix64.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Minimal PCG32 engine. Hand-rolled so that every sampler in the library is
// bit-reproducible across platforms and standard library versions.
class Pcg32 {
 public:
  Pcg32() : Pcg32(0x853c49e6748fea9bULL) {}
  explicit Pcg32(std::uint64_t seed) {
    state_ = 0;
    inc_ = (mix64(seed, 0x5851f42d4c957f2dULL) << 1u) | 1u;
    next_u32();
    state_ += mix64(seed);
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform double in [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as input to log().
  double u01_positive() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint32_t bounded(std::uint32_t n) {
    std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * n;
    std::uint32_t lo = static_cast<std::uint32_t>(m);
    if (lo < n) {
      std::uint32_t threshold = (-n) % n;
      while (lo < threshold) {
        m = static_cast<std::uint64_t>(next_u32()) * n;
        lo = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  bool bernoulli(double p) { return u01() < p; }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

// Child stream for one Monte Carlo trial, keyed by
// (master seed, term id, target index, challenger index, trial index).
// The derivation is pure, so trials may be scheduled on any thread in any
// order without changing their draws.
inline Pcg32 trial_stream(std::uint64_t master, std::uint64_t term,
                          std::uint64_t target, std::uint64_t challenger,
                          std::uint64_t trial) {
  std::uint64_t h = mix64(master, 0xa076'1d64'78bd'642fULL);
  h = mix64(h, term);
  h = mix64(h, target);
  h = mix64(h, challenger);
  h = mix64(h, trial);
  return Pcg32(h);
}

inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master, 0xe703'7ed1'a0b4'28dbULL + index);
}

// Standard normal via Box-Muller (first coordinate only).
double sample_normal(Pcg32& rng);

// Zero-mean Laplace with scale b.
double sample_laplace(Pcg32& rng, double b);

// Binomial(n, p) by chunked inverse-transform search. Exact and portable;
// cost is O(n p) per draw, which is also the size of the result.
std::uint32_t sample_binomial(Pcg32& rng, std::uint32_t n, double p);

// Beta(alpha, beta) on [0, 1] via Johnk's rejection method (alpha, beta <= 1)
// or the gamma-ratio construction otherwise.
double sample_beta(Pcg32& rng, double alpha, double beta);

// Draws k distinct values from {0, ..., n-1} (unsorted) by partial
// Fisher-Yates over a persistent identity permutation. The permutation is
// restored after every draw, so repeated draws cost O(k) each.
class DistinctSampler {
 public:
  void draw(Pcg32& rng, std::uint32_t n, std::uint32_t k,
            std::vector<std::uint32_t>& out);

 private:
  std::vector<std::uint32_t> perm_;
  std::vector<std::uint32_t> swaps_;
};

}  // namespace radkit

// Copyright 2026 The Coarselab Authors
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

#ifndef COARSELAB_RNG_HPP
#define COARSELAB_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace coarselab {

/// SplitMix64 step; used to derive independent subseeds so that
/// parallel work items can be seeded reproducibly.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

/// Deterministic random source.  Distributions are implemented by hand
/// on top of the (standardised) mt19937_64 stream, so identical seeds
/// give identical values on every platform and build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), has_spare_(false), spare_(0) {}

  std::uint64_t u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_pos() {
    return (static_cast<double>(u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(u64() % span);
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_gaussian() {
    return {gaussian(), gaussian()};
  }

  /// Uniform point on the unit circle.
  std::complex<double> unit_phase() {
    const double a = 2.0 * M_PI * uniform();
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_;
  double spare_;
};

}  // namespace coarselab

#endif  // COARSELAB_RNG_HPP

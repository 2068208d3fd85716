// Copyright 2026 The FairSim Authors.
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

#ifndef FAIRSIM_RANDOM_HPP_
#define FAIRSIM_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace fairsim {

// splitmix64 finalizer. Used to turn (seed, tag) pairs into independent
// engine seeds so that every stream in an experiment is addressable.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t tag) {
  return Mix64(seed ^ Mix64(tag));
}

// Seedable stream with pinned transforms. The engine is std::mt19937_64,
// whose output sequence is fixed by the standard; the distribution
// transforms below are written out because the std:: distributions are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // [0, 1) with 53 random bits. One engine draw.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Box-Muller, cosine branch only: exactly two engine draws per sample.
  double Normal(double mean, double stddev) {
    const double u1 = 1.0 - Uniform01();  // (0, 1]
    const double u2 = Uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
  }

  // One engine draw. p = 1 always succeeds since Uniform01() < 1.
  bool Bernoulli(double p) { return Uniform01() < p; }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairsim

#endif  // FAIRSIM_RANDOM_HPP_

/* Copyright 2026 The nphmc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <random>

namespace nphmc {

/// Source of randomness for the samplers. Only uniform() is primitive; the
/// derived draws are deterministic transforms of it, so substituting the
/// uniform stream (e.g. in tests) scripts every draw. The samplers document
/// their draw order against this interface.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform draw in the open interval (0, 1).
  virtual double uniform() = 0;

  /// Standard normal via the quantile transform of uniform(). Virtual so a
  /// scripted source can inject exact values.
  virtual double normal();
  /// Standard Laplace (location 0, scale 1) via its quantile.
  virtual double laplace();
  /// Uniform index in {0, ..., n-1}; n must be >= 1.
  std::size_t uniform_index(std::size_t n);
};

/// Deterministic stream backed by mt19937_64. Uniforms are (x >> 11) * 2^-53
/// shifted into the open interval, so a fixed seed yields identical streams
/// on any platform.
class RandomStream final : public RandomSource {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  double uniform() override;

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-run seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-run seed: splitmix64 of the master seed offset by the run index.
/// Parallel scheduling cannot change outputs because the derivation only
/// depends on (master, run).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run);

}  // namespace nphmc

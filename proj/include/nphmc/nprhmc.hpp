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

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "nphmc/nphmc.hpp"

namespace nphmc {

struct BoundaryHit {
  double t_hit = 0.0;  // 0 < t_hit <= time limit
  Trace q_before;      // hit point nudged onto the incoming side
  Trace q_after;       // hit point nudged onto the outgoing side
};

/// Caller-supplied discontinuity oracles for the reflective integrator.
/// next_boundary: earliest boundary a particle moving linearly from (q, p)
/// hits within the time limit. decompose: split p into components parallel
/// and perpendicular to the boundary at q (summing to p).
struct BoundaryOracle {
  std::function<std::optional<BoundaryHit>(const Trace& q, const Trace& p, double limit,
                                           const Model& m)>
      next_boundary;
  std::function<std::pair<Trace, Trace>(const Trace& q, const Trace& p, const Model& m)>
      decompose;
};

struct OracleContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Built-in oracle for axis-aligned branch conditions of the form
/// coordinate_i < threshold(i): next_boundary solves q_i + t p_i = threshold
/// per axis and reports the earliest positive hit; decompose takes the hit
/// axis as the perpendicular direction.
BoundaryOracle axis_threshold_oracle(std::function<std::optional<double>(std::size_t)> thresholds);

/// NP-RHMC integrator. Within each position step, boundary hits are handled
/// by refraction (perpendicular momentum rescaled to sqrt(|p_perp|^2 - 2 dU))
/// when the perpendicular kinetic energy strictly exceeds 2 dU, else by
/// reflection; crossings into a new branch extend the state first. With an
/// oracle that never reports a boundary this is the plain NP integrator.
IntegrateResult nprhmc_integrate(const State& start, const Model& m,
                                 const BoundaryOracle& oracle, const SamplerConfig& cfg,
                                 RandomSource& rng);

/// Chain transition built on the reflective integrator (Gaussian momentum
/// and acceptance, as in plain NP-HMC).
StepResult nprhmc_step(const Trace& q0, const Model& m, const BoundaryOracle& oracle,
                       const SamplerConfig& cfg, RandomSource& rng);

}  // namespace nphmc

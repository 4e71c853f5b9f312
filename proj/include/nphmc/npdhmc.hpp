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

#include "nphmc/nphmc.hpp"

namespace nphmc {

/// extend with mixed momentum: appended momentum coordinates are Laplace
/// when the demanding sample site is discontinuous (moved at unit speed,
/// x0 + t sign(y0)), Gaussian otherwise (moved linearly, x0 + t y0).
ExtendStatus extend_mixed(const Model& m, State& current, State& initial,
                          std::vector<CoordKind>& kinds, double t_cont, double t_disc,
                          RandomSource& rng, const ExtendOptions& opt,
                          RunOutcome* run_out = nullptr);

struct CoordUpdate {
  bool jumped = false;
  double delta_u = 0.0;
};

/// Single discontinuous-coordinate update: move q_j by epsilon*sign(p_j),
/// extend the starred state, then either jump (keep the move, pay |dU| of
/// kinetic energy) or reflect (negate p_j) when |p_j| <= dU. u_current
/// carries U at the current state and is kept in sync.
CoordUpdate coord_integrator(const Model& m, State& cur, State& init,
                             std::vector<CoordKind>& kinds, std::size_t j, double t_cont,
                             double t_disc, double epsilon, RandomSource& rng,
                             const ExtendOptions& opt, double& u_current);

/// NP-DHMC integrator: per iteration, half Gaussian momentum and half
/// position steps on the continuous coordinates bracket a coordinate-wise
/// sweep over a fresh random permutation of the live discontinuous indices
/// (operator splitting). Indices appended mid-sweep enter from the next
/// iteration. When no discontinuous coordinate is live the iteration reduces
/// to the plain NP leapfrog iteration, arithmetic included.
IntegrateResult npdhmc_integrate(const State& start, const Model& m, const SamplerConfig& cfg,
                                 RandomSource& rng);

/// One NP-DHMC transition. Momentum kick is Gaussian on continuous indices
/// and Laplace on discontinuous ones; the acceptance uses the matching mixed
/// density (cfg.mixed_accept toggles the Gaussian-only variant).
StepResult npdhmc_step(const Trace& q0, const Model& m, const SamplerConfig& cfg,
                       RandomSource& rng);

std::vector<ChainSample> run_chain_npdhmc(const Model& m, const SamplerConfig& cfg,
                                          RandomSource& rng);

}  // namespace nphmc

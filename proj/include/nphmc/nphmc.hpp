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
#include <functional>
#include <string>
#include <vector>

#include "nphmc/ad.hpp"
#include "nphmc/model.hpp"
#include "nphmc/rng.hpp"
#include "nphmc/trace.hpp"

namespace nphmc {

struct SamplerConfig {
  double epsilon = 0.1;   // leapfrog step size
  int steps = 5;          // leapfrog count L
  int n_samples = 1000;   // kept samples (after thinning, before burn-in)
  int burn_in = 100;
  int thinning = 1;       // chain advances thinning steps per kept sample
  std::uint64_t seed = 1;
  bool trim = true;            // drop unused appended coordinates mid-trajectory
  std::size_t extend_cap = 1000000;
  bool mixed_accept = true;    // NP-DHMC: Laplace factors in the acceptance density
  double rmh_sigma = 1.0;      // RMH proposal scale
};

/// Throws std::invalid_argument when the config is unusable
/// (burn_in >= n_samples, nonpositive step size, ...).
void validate(const SamplerConfig& cfg);

enum class ExtendStatus : std::uint8_t {
  kOk,
  kUnsupported,     // the run failed; no extension can reach the support
  kBudgetExceeded,  // appended more than the cap
};

struct ExtendOptions {
  std::size_t cap = 1000000;
  bool mixed = false;       // Laplace momentum for appended discontinuous coords
  bool trim = false;        // trim unused appended coordinates
  std::size_t min_len = 0;  // trim floor: the supported length of the step's
                            // initial state is never cut
};

/// The extend subroutine. While the current position lies outside the domain
/// of U_{|q|}, draws (x0, y0), appends (x0, y0) to the initial state and the
/// forward-moved pair to the current one: the appended coordinate moves as
/// if it had travelled with constant potential since time 0, which is
/// x0 + t*y0 under Gaussian momentum and x0 + t*sign(y0) under Laplace
/// momentum (unit-speed dynamics). Newly appended continuous and
/// discontinuous coordinates may sit at different elapsed times inside one
/// integrator iteration, hence the two time arguments. Implemented by
/// interleaving with the program run, so appends happen exactly at the
/// sample sites that demand them. kinds tracks one tag per live coordinate.
ExtendStatus extend_states(const Model& m, State& current, State& initial,
                           std::vector<CoordKind>& kinds, double t_cont, double t_disc,
                           RandomSource& rng, const ExtendOptions& opt,
                           RunOutcome* run_out = nullptr);

/// Spec-shaped convenience wrapper around extend_states (no trim).
struct ExtendResult {
  State current;
  State initial;
  ExtendStatus status;
};
ExtendResult extend(const State& current, const State& initial, double t, const Model& m,
                    RandomSource& rng, std::size_t cap = 1000000);

struct IntegrateResult {
  State proposal;
  State initial;  // dimension-matched extended initial state
  std::vector<CoordKind> kinds;
  bool ok = false;
  std::string reason;
};

/// Nonparametric leapfrog integrator: L iterations of half momentum step,
/// full position step, extension (at elapsed time (i+1) epsilon) when the
/// position left the support, half momentum step at the new length; the
/// returned proposal has its momentum negated.
IntegrateResult np_integrate(const State& start, const Model& m, const SamplerConfig& cfg,
                             RandomSource& rng);

/// log of the unclamped Hastings ratio
/// [w_{<=N}(q) phi_2N(q,p)] / [w_{<=N}(q0) phi_2N(q0,p0)] for states of the
/// common extended length N. -inf when the proposal is unsupported.
double acceptance_log_ratio(const State& proposal, const State& initial, const Model& m);

/// Mixed-momentum variant: Gaussian factors on continuous indices, Laplace
/// on discontinuous ones (when laplace_on_discontinuous is set; otherwise
/// Gaussian everywhere, reproducing the plain helper).
double acceptance_log_ratio_mixed(const State& proposal, const State& initial,
                                  const std::vector<CoordKind>& kinds, const Model& m,
                                  bool laplace_on_discontinuous);

struct StepResult {
  Trace trace;
  std::vector<double> value;
  bool accepted = false;
  std::string note;  // rejection reason code when a step failed
};

/// One NP-HMC transition: momentum kick, NP integration, Hastings accept,
/// marginalisation to the supported prefix.
///
/// Draw order on rng: momentum coordinates in index order, then per
/// extension the pair (x0, y0), then one acceptance uniform. The eNPHMC
/// oracle consumes draws in the same order, which is what makes shared-seed
/// equivalence checks meaningful.
StepResult nphmc_step(const Trace& q0, const Model& m, const SamplerConfig& cfg,
                      RandomSource& rng);

struct ChainSample {
  Trace trace;
  std::vector<double> value;
  bool accepted = false;
};

using StepFn =
    std::function<StepResult(const Trace&, const Model&, const SamplerConfig&, RandomSource&)>;

/// Generic chain driver: initialises from the empty trace by an extending
/// run, then iterates the given transition, applying thinning (the last
/// sample of each block is kept) and burn-in.
std::vector<ChainSample> run_chain_with(const Model& m, const SamplerConfig& cfg,
                                        RandomSource& rng, const StepFn& step);

/// NP-HMC chain.
std::vector<ChainSample> run_chain(const Model& m, const SamplerConfig& cfg, RandomSource& rng);

/// Initial trace: prior-extend from the empty trace until supported.
Trace initial_trace(const Model& m, const SamplerConfig& cfg, RandomSource& rng);

/// True iff L leapfrog steps from s stay inside the domain of U_{|q|} at
/// every position step (the eNPHMC search predicate).
bool validstate(const State& s, const Model& m, const SamplerConfig& cfg);

/// Fixed-dimension leapfrog integrator with final momentum negation.
/// Positions must stay inside the support (validstate).
State hmc_integrate(const State& start, const Model& m, const SamplerConfig& cfg);

/// Reference algorithm equivalent to nphmc_step: trims, kicks, appends
/// (x0, y0) pairs until the state is valid, integrates at fixed dimension,
/// then accepts. Consumes rng draws in the same canonical order as
/// nphmc_step. Used as a test oracle.
State enphmc_step(const State& s, const Model& m, const SamplerConfig& cfg, RandomSource& rng);

}  // namespace nphmc

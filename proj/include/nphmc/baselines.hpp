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

struct WeightedSample {
  Trace trace;
  std::vector<double> value;
  double log_weight = 0.0;
};

/// Single-site lightweight MH: pick a site uniformly, redraw its coordinate
/// from the standard normal, re-run reusing the remaining coordinates
/// positionally (extending on demand, dropping leftovers), and accept with
/// min{1, w(q') |q| / (w(q) |q'|)}. The base densities of reused coordinates
/// and of the changed site cancel against the prior proposal, leaving the
/// weight ratio times the site-count correction.
StepResult lmh_step(const Trace& q0, const Model& m, RandomSource& rng,
                    std::size_t extend_cap = 1000000);

/// Random-walk single-site MH: perturb one coordinate by sigma * N(0,1).
/// The proposal is symmetric, so the ratio keeps only the target ratio:
/// weight ratio, base density of the changed coordinate, site-count factor.
StepResult rmh_step(const Trace& q0, const Model& m, double sigma_prop, RandomSource& rng,
                    std::size_t extend_cap = 1000000);

struct ImportanceResult {
  std::vector<WeightedSample> samples;
  std::size_t skipped = 0;  // runs dropped by the extension cap or failures
};

/// Prior importance sampling: fresh standard-normal trace per sample,
/// log-weight from the observe sites.
ImportanceResult importance_sample(const Model& m, std::size_t n, RandomSource& rng,
                                   std::size_t extend_cap = 1000000);

}  // namespace nphmc

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

#include "nphmc/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "nphmc/dist.hpp"

namespace nphmc {

namespace {

struct Proposal {
  Trace trace;
  RunOutcome outcome;
  bool ok = false;
};

Proposal rerun_with_site(const Model& m, const Trace& q0, std::size_t site, double x_new,
                         RandomSource& rng, std::size_t cap) {
  Trace q = q0;
  q[site] = x_new;
  Extender hook = [&rng](std::size_t, CoordKind) { return rng.normal(); };
  auto [out, grown] = m.run_extending(q, hook, cap);
  Proposal p;
  if (!out.ok()) return p;
  p.trace = prefix(grown, out.consumed);  // leftovers dropped
  p.outcome = std::move(out);
  p.ok = true;
  return p;
}

StepResult single_site_step(const Trace& q0, const Model& m, RandomSource& rng,
                            std::size_t cap, bool random_walk, double sigma) {
  check_finite(q0, "single-site MH");
  RunOutcome r0 = m.replay(q0);
  if (!r0.ok() || r0.consumed != q0.size())
    throw std::invalid_argument("single-site MH: current trace must have positive density");
  std::size_t n = q0.size();
  std::size_t site = rng.uniform_index(n);
  double x_old = q0[site];
  double x_new = random_walk ? x_old + sigma * rng.normal() : rng.normal();

  Proposal prop = rerun_with_site(m, q0, site, x_new, rng, cap);
  if (!prop.ok) return {q0, r0.value, false, "proposal failed"};

  double log_ratio = prop.outcome.log_weight - r0.log_weight +
                     std::log(static_cast<double>(n)) -
                     std::log(static_cast<double>(prop.trace.size()));
  if (random_walk) {
    // Symmetric kernel: only the base-measure factor of the changed
    // coordinate survives.
    log_ratio += norm_log_pdf(x_new) - norm_log_pdf(x_old);
  }
  double u = rng.uniform();
  if (std::log(u) < std::min(0.0, log_ratio)) {
    return {std::move(prop.trace), std::move(prop.outcome.value), true, ""};
  }
  return {q0, r0.value, false, ""};
}

}  // namespace

StepResult lmh_step(const Trace& q0, const Model& m, RandomSource& rng, std::size_t extend_cap) {
  return single_site_step(q0, m, rng, extend_cap, false, 0.0);
}

StepResult rmh_step(const Trace& q0, const Model& m, double sigma_prop, RandomSource& rng,
                    std::size_t extend_cap) {
  return single_site_step(q0, m, rng, extend_cap, true, sigma_prop);
}

ImportanceResult importance_sample(const Model& m, std::size_t n, RandomSource& rng,
                                   std::size_t extend_cap) {
  if (n < 1) throw std::invalid_argument("importance_sample: n must be >= 1");
  ImportanceResult res;
  res.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Extender hook = [&rng](std::size_t, CoordKind) { return rng.normal(); };
    auto [out, grown] = m.run_extending(Trace{}, hook, extend_cap);
    if (!out.ok()) {
      ++res.skipped;
      continue;
    }
    res.samples.push_back({std::move(grown), std::move(out.value), out.log_weight});
  }
  return res;
}

}  // namespace nphmc

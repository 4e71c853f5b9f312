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

#include "nphmc/ad.hpp"

#include <cmath>
#include <stdexcept>

namespace nphmc {

GradResult grad_potential(const Model& m, const Trace& q) {
  check_finite(q, "grad_potential");
  GradResult res;
  TapedRun run = m.replay_taped(q);
  if (!run.outcome.ok()) {
    res.status = GradStatus::kOutOfDomain;
    return res;
  }
  res.grad.partials.assign(q.size(), 0.0);
  res.grad.value = run.outcome.log_weight;
  res.grad.consumed = run.outcome.consumed;
  res.grad.kinds = run.outcome.kinds;
  res.status = GradStatus::kOk;
  if (run.weight_node >= 0) {
    std::vector<double> adj = run.tape.backprop(run.weight_node);
    for (std::size_t i = 0; i < run.coord_nodes.size(); ++i) {
      std::int32_t node = run.coord_nodes[i];
      if (node < 0) continue;
      double dU = -adj[static_cast<std::size_t>(node)];  // U = -log w
      if (!std::isfinite(dU)) {
        res.status = GradStatus::kNumericalFailure;
        return res;
      }
      res.grad.partials[i] = dU;
    }
  }
  return res;
}

GradResult grad_fd(const Model& m, const Trace& q, double h) {
  if (!(h > 0.0)) throw std::domain_error("grad_fd: step h must be positive");
  check_finite(q, "grad_fd");
  GradResult res;
  RunOutcome base = m.replay(q);
  if (!base.ok()) {
    res.status = GradStatus::kOutOfDomain;
    return res;
  }
  res.status = GradStatus::kOk;
  res.grad.partials.assign(q.size(), 0.0);
  res.grad.value = base.log_weight;
  res.grad.consumed = base.consumed;
  res.grad.kinds = base.kinds;
  res.grad.verified.assign(q.size(), 0);
  Trace work = q;
  for (std::size_t i = 0; i < base.consumed; ++i) {
    if (base.kinds[i] != CoordKind::kContinuous) continue;
    work[i] = q[i] + h;
    RunOutcome up = m.replay(work);
    work[i] = q[i] - h;
    RunOutcome dn = m.replay(work);
    work[i] = q[i];
    // A perturbed point outside the support, or a branch flip that changed
    // the consumed length, makes this index unverifiable.
    if (!up.ok() || !dn.ok() || up.consumed != base.consumed || dn.consumed != base.consumed) {
      continue;
    }
    res.grad.partials[i] = -(up.log_weight - dn.log_weight) / (2.0 * h);
    res.grad.verified[i] = 1;
  }
  return res;
}

}  // namespace nphmc

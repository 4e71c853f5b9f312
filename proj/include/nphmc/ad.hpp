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
#include <vector>

#include "nphmc/model.hpp"
#include "nphmc/trace.hpp"

namespace nphmc {

/// Partial derivatives of the potential U_{|q|} at q. partials has one slot
/// per coordinate of q; it is zero at discontinuous indices and beyond the
/// supported prefix (U is constant in those directions). value is the
/// log-density -U.
struct Gradient {
  std::vector<double> partials;
  double value = 0.0;
  std::size_t consumed = 0;
  std::vector<CoordKind> kinds;
  std::vector<std::uint8_t> verified;  // grad_fd only: per-index reliability
};

enum class GradStatus : std::uint8_t { kOk, kOutOfDomain, kNumericalFailure };

struct GradResult {
  GradStatus status = GradStatus::kOutOfDomain;
  Gradient grad;
  bool ok() const { return status == GradStatus::kOk; }
};

/// dU/dq_i for each continuous coordinate, from one taped model execution.
/// The executed branch is fixed, so branch predicates differentiate as
/// constants. Requires truncation(m, q) > 0.
GradResult grad_potential(const Model& m, const Trace& q);

/// Independent central-difference oracle: (U(q + h e_i) - U(q - h e_i)) / 2h
/// per continuous index. Indices whose perturbation crosses a support
/// boundary are flagged unverified instead of failing.
GradResult grad_fd(const Model& m, const Trace& q, double h);

}  // namespace nphmc

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
#include <optional>
#include <vector>

namespace nphmc {

class Model;

/// A trace is the finite sequence of latent coordinates one program
/// execution consumes; it is the state a chain element carries. The empty
/// trace is a legal value (a program start) but carries no density.
using Trace = std::vector<double>;

/// Position-momentum pair moved by the Hamiltonian integrators.
/// |q| == |p| at every externally visible point.
struct State {
  Trace q;
  Trace p;
};

/// Per-coordinate tag: does the density depend on this coordinate through a
/// branch (Discontinuous) or smoothly (Continuous)? Declared by the model
/// author at each sample site.
enum class CoordKind : std::uint8_t { kContinuous, kDiscontinuous };

/// Throws std::invalid_argument if any coordinate is NaN or infinite.
/// NaN is rejected eagerly; propagating it silently corrupts acceptance
/// ratios.
void check_finite(const Trace& q, const char* where);

/// log of the standard-normal base density of q on R^{|q|}:
/// -(|q|/2) log(2 pi) - 1/2 sum q_i^2. Throws std::domain_error on the
/// empty trace (length-0 traces carry no density).
double log_base_density(const Trace& q);

inline Trace prefix(const Trace& q, std::size_t k) {
  return Trace(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k));
}

/// The shortest prefix of q the model gives positive weight, or nullopt.
/// By the prefix property at most one prefix can be supported.
std::optional<Trace> supported_prefix(const Model& m, const Trace& q);

/// Length of the supported prefix, or nullopt.
std::optional<std::size_t> supported_prefix_len(const Model& m, const Trace& q);

/// log of the truncation w_{<=n}(q) = sum_k w(q^{1..k}); -inf when no prefix
/// is supported. By the prefix property the sum has at most one nonzero
/// summand, so one model execution answers the query.
double log_truncation(const Model& m, const Trace& q);

/// Linear-space truncation; exp of the above (0 when unsupported).
double truncation(const Model& m, const Trace& q);

/// Potential energy U_{|q|}(q) = -log w_{<=|q|}(q), defined exactly on the
/// support of the truncation; nullopt signals the caller to extend or
/// reflect. No constant offset is applied.
std::optional<double> potential(const Model& m, const Trace& q);

}  // namespace nphmc

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

#include "nphmc/trace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nphmc/dist.hpp"
#include "nphmc/model.hpp"

namespace nphmc {

void check_finite(const Trace& q, const char* where) {
  for (double x : q) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(where) + ": trace coordinate is NaN or infinite");
    }
  }
}

double log_base_density(const Trace& q) {
  if (q.empty()) throw std::domain_error("log_base_density: empty trace carries no density");
  check_finite(q, "log_base_density");
  double ss = 0.0;
  for (double x : q) ss += x * x;
  return -0.5 * static_cast<double>(q.size()) * kLogTwoPi - 0.5 * ss;
}

std::optional<std::size_t> supported_prefix_len(const Model& m, const Trace& q) {
  RunOutcome out = m.replay(q);
  if (out.ok()) return out.consumed;
  return std::nullopt;
}

std::optional<Trace> supported_prefix(const Model& m, const Trace& q) {
  if (auto k = supported_prefix_len(m, q)) return prefix(q, *k);
  return std::nullopt;
}

double log_truncation(const Model& m, const Trace& q) {
  // The prefix property makes the cumulative sum single-summand: one
  // execution finds the supported prefix and its weight, or nothing.
  RunOutcome out = m.replay(q);
  if (out.ok()) return out.log_weight;
  return -std::numeric_limits<double>::infinity();
}

double truncation(const Model& m, const Trace& q) { return std::exp(log_truncation(m, q)); }

std::optional<double> potential(const Model& m, const Trace& q) {
  double lw = log_truncation(m, q);
  if (lw == -std::numeric_limits<double>::infinity()) return std::nullopt;
  return -lw;
}

}  // namespace nphmc

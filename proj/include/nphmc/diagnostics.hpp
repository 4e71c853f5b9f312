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
#include <vector>

namespace nphmc {

/// Normalized histogram over either real bins (edges, ascending) or a
/// discrete labelled support. Masses are nonnegative and sum to 1.
struct Histogram {
  std::vector<double> edges;   // size bins+1 when binned; empty when discrete
  std::vector<double> labels;  // discrete support; empty when binned
  std::vector<double> mass;

  bool discrete() const { return edges.empty(); }
};

/// Histogram of real data over uniform bins on [lo, hi]; out-of-range data
/// is clamped into the boundary bins.
Histogram binned_histogram(const std::vector<double>& data, double lo, double hi,
                           std::size_t bins);

/// Histogram over integer labels lo..hi plus (optionally) a tail bucket
/// collecting everything above hi.
Histogram discrete_histogram(const std::vector<double>& data, int lo, int hi, bool tail_bucket);

/// Same support as discrete_histogram, massed by a pmf callback (the tail
/// bucket takes the leftover mass).
Histogram pmf_histogram(const std::function<double(int)>& pmf, int lo, int hi, bool tail_bucket);

/// Total variation distance (1/2) sum |a_i - b_i|. The supports must match
/// exactly; mismatch throws std::invalid_argument.
double tvd(const Histogram& a, const Histogram& b);

struct EssResult {
  double ess = 0.0;   // clamped to (0, n]
  double raw = 0.0;   // unclamped estimate
  bool clamped = false;
};

/// Autocorrelation ESS: n / (1 + 2 sum rho_t), the sum truncated at the
/// first t with rho_t + rho_{t+1} < 0. Zero-variance series give ESS = n by
/// convention. Requires length >= 10.
EssResult ess_autocorr(const std::vector<double>& series);

/// Importance-weight ESS (sum w)^2 / sum w^2. Weights must be nonnegative
/// with at least one positive entry.
double ess_weighted(const std::vector<double>& weights);

/// Log pointwise predictive density: sum_i log (1/M) sum_j exp(loglik(j, i)),
/// computed with log-sum-exp. loglik(j, i) is the log-likelihood of test
/// point i under parameter sample j.
double lppd(std::size_t n_samples, std::size_t n_points,
            const std::function<double(std::size_t, std::size_t)>& loglik);

/// Gaussian-kernel density estimate on the grid. Default bandwidth
/// 1.06 * sd * n^(-1/5). Requires >= 2 samples with positive variance.
std::vector<double> kde(const std::vector<double>& samples, const std::vector<double>& grid,
                        std::optional<double> bandwidth = std::nullopt);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);

}  // namespace nphmc

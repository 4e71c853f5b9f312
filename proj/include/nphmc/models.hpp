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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nphmc/model.hpp"

namespace nphmc {

/// Geometric(p) by repeated biased coin flips; one discontinuous coordinate
/// per flip, value = trial count K. No observe sites, so the density is the
/// branch indicator. Ships axis thresholds (the flip branches at
/// x < quantile(p)) for the reflective integrator.
Model geometric(double p);

/// One-sided random walk: start ~ Uniform(0,3) (continuous), steps
/// ~ Uniform(-1,1) (discontinuous, they drive the loop guard), walk while
/// position > 0 and distance < 10, observe the travelled distance under
/// Normal(1.1, 0.1). Value = start.
Model random_walk();

/// Training/test data for the mixture models: 3-d points from an
/// equal-weight Gaussian mixture with true_k components, means uniform on
/// [0,100]^3, per-axis standard deviation 10.
struct Dataset3D {
  std::vector<std::array<double, 3>> points;
  std::uint64_t seed = 0;
  int true_k = 0;
  std::vector<std::array<double, 3>> true_means;
};

Dataset3D make_gmm_dataset(std::uint64_t seed, int true_k, std::size_t n_points);

/// One point per row, 3 comma-separated columns.
void write_csv(const Dataset3D& data, const std::string& path);
std::vector<std::array<double, 3>> read_points_csv(const std::string& path);

/// Unbounded Gaussian mixture: K ~ Poisson(10)+1 (discontinuous), component
/// means uniform on [0,100]^3 (continuous, 3 sites each), each datum scored
/// under the equal-weight mixture of N3(mu_k, 10^2 I). Value = [K, means...].
Model gmm(Dataset3D training);

/// Dirichlet-process mixture via stick breaking: beta_k ~ Beta(1, alpha)
/// (discontinuous, drives the loop), component location uniform on [0,100]^3
/// (continuous), components emitted until the leftover stick is at most
/// eps_cut. Value = [K, weights..., means...].
Model dpmm(Dataset3D training, double alpha, double eps_cut);

/// Mixture log-likelihood of a single point under one posterior sample's
/// payload (used by the predictive-density metrics).
double gmm_point_log_lik(const std::vector<double>& value, const std::array<double, 3>& y);
double dpmm_point_log_lik(const std::vector<double>& value, const std::array<double, 3>& y);

/// Same under the dataset's generating parameters (the point estimate).
double true_point_log_lik(const Dataset3D& data, const std::array<double, 3>& y);

}  // namespace nphmc

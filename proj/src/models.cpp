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

#include "nphmc/models.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "nphmc/dist.hpp"
#include "nphmc/rng.hpp"

namespace nphmc {

namespace {

// log of the N3(mu, 10^2 I) density constant.
constexpr double kSigma = 10.0;
const double kLogNorm3 = -3.0 * (0.5 * kLogTwoPi + std::log(kSigma));

template <class S>
S log_normal3(const std::array<double, 3>& x, const S* mu) {
  S d0 = S(x[0]) - mu[0];
  S d1 = S(x[1]) - mu[1];
  S d2 = S(x[2]) - mu[2];
  return S(kLogNorm3) - (d0 * d0 + d1 * d1 + d2 * d2) / S(2.0 * kSigma * kSigma);
}

double log_mixture(const std::vector<double>& log_w, const std::vector<double>& means,
                   const std::array<double, 3>& y) {
  std::vector<double> comps(log_w.size());
  for (std::size_t k = 0; k < log_w.size(); ++k) {
    comps[k] = log_w[k] + log_normal3<double>(y, &means[3 * k]);
  }
  return log_sum_exp(comps);
}

}  // namespace

Model geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("geometric: requires 0 < p < 1");
  Model m("geometric", [p](auto& ctx) {
    using S = typename std::decay_t<decltype(ctx)>::scalar_type;
    const Dist1D flip = Dist1D::uniform(0.0, 1.0);
    int k = 1;
    while (!(value_of(ctx.sample(flip, CoordKind::kDiscontinuous)) < p)) ++k;
    return std::vector<S>{S(static_cast<double>(k))};
  });
  double cut = norm_inv_cdf(p);
  m.set_axis_thresholds([cut](std::size_t) { return std::optional<double>(cut); });
  m.set_kind_map([](std::size_t) { return CoordKind::kDiscontinuous; });
  return m;
}

Model random_walk() {
  Model m("walk", [](auto& ctx) {
    using S = typename std::decay_t<decltype(ctx)>::scalar_type;
    using std::abs;
    const Dist1D start_dist = Dist1D::uniform(0.0, 3.0);
    const Dist1D step_dist = Dist1D::uniform(-1.0, 1.0);
    const Dist1D measured = Dist1D::normal(1.1, 0.1);
    // The density depends on the start only through which branch the loop
    // guard takes (the distance likelihood never sees it), so its influence
    // is discontinuous and the gated coordinate dynamics apply.
    S start = ctx.sample(start_dist, CoordKind::kDiscontinuous);
    S position = start;
    S distance = S(0.0);
    while (value_of(position) > 0.0 && value_of(distance) < 10.0) {
      S step = ctx.sample(step_dist, CoordKind::kDiscontinuous);
      position += step;
      distance += abs(step);
    }
    ctx.observe(measured, distance);
    return std::vector<S>{start};
  });
  m.set_kind_map([](std::size_t) { return CoordKind::kDiscontinuous; });
  return m;
}

Dataset3D make_gmm_dataset(std::uint64_t seed, int true_k, std::size_t n_points) {
  if (true_k < 1) throw std::invalid_argument("make_gmm_dataset: true_k must be >= 1");
  Dataset3D data;
  data.seed = seed;
  data.true_k = true_k;
  RandomStream rng(seed);
  data.true_means.resize(static_cast<std::size_t>(true_k));
  for (auto& mu : data.true_means)
    for (double& c : mu) c = 100.0 * rng.uniform();
  data.points.resize(n_points);
  for (auto& x : data.points) {
    const auto& mu = data.true_means[rng.uniform_index(static_cast<std::size_t>(true_k))];
    for (int a = 0; a < 3; ++a) x[static_cast<std::size_t>(a)] = mu[static_cast<std::size_t>(a)] + kSigma * rng.normal();
  }
  return data;
}

void write_csv(const Dataset3D& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  for (const auto& x : data.points) out << x[0] << "," << x[1] << "," << x[2] << "\n";
}

std::vector<std::array<double, 3>> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_points_csv: cannot open " + path);
  std::vector<std::array<double, 3>> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> x{};
    std::stringstream ss(line);
    std::string cell;
    for (int a = 0; a < 3; ++a) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("read_points_csv: bad row");
      x[static_cast<std::size_t>(a)] = std::stod(cell);
    }
    points.push_back(x);
  }
  return points;
}

Model gmm(Dataset3D training) {
  if (training.points.empty()) throw std::invalid_argument("gmm: training set is empty");
  auto data = std::make_shared<Dataset3D>(std::move(training));
  Model m("gmm", [data](auto& ctx) {
    using S = typename std::decay_t<decltype(ctx)>::scalar_type;
    const Dist1D count = Dist1D::poisson(10.0);
    const Dist1D loc = Dist1D::uniform(0.0, 100.0);
    int k_comp = 1 + static_cast<int>(value_of(ctx.sample(count, CoordKind::kDiscontinuous)));
    std::vector<S> mu;
    mu.reserve(static_cast<std::size_t>(3 * k_comp));
    for (int k = 0; k < 3 * k_comp; ++k) mu.push_back(ctx.sample(loc, CoordKind::kContinuous));
    const double log_k = std::log(static_cast<double>(k_comp));
    std::vector<S> comps(static_cast<std::size_t>(k_comp));
    for (const auto& x : data->points) {
      for (int k = 0; k < k_comp; ++k)
        comps[static_cast<std::size_t>(k)] = log_normal3(x, &mu[static_cast<std::size_t>(3 * k)]);
      ctx.factor(log_sum_exp(comps) - S(log_k));
    }
    std::vector<S> out;
    out.reserve(1 + mu.size());
    out.push_back(S(static_cast<double>(k_comp)));
    for (const S& v : mu) out.push_back(v);
    return out;
  });
  m.set_kind_map([](std::size_t i) {
    return i == 0 ? CoordKind::kDiscontinuous : CoordKind::kContinuous;
  });
  return m;
}

Model dpmm(Dataset3D training, double alpha, double eps_cut) {
  if (training.points.empty()) throw std::invalid_argument("dpmm: training set is empty");
  if (!(alpha > 0.0)) throw std::invalid_argument("dpmm: alpha must be > 0");
  if (!(eps_cut > 0.0 && eps_cut < 1.0)) throw std::invalid_argument("dpmm: eps_cut in (0,1)");
  auto data = std::make_shared<Dataset3D>(std::move(training));
  Model m("dpmm", [data, alpha, eps_cut](auto& ctx) {
    using S = typename std::decay_t<decltype(ctx)>::scalar_type;
    using std::log;
    const Dist1D stick_dist = Dist1D::beta1(alpha);
    const Dist1D loc = Dist1D::uniform(0.0, 100.0);
    S stick = S(1.0);
    S beta = S(0.0);
    S cum = S(1.0);
    std::vector<S> weights;
    std::vector<S> means;
    while (value_of(stick) > eps_cut) {
      cum *= S(1.0) - beta;
      beta = ctx.sample(stick_dist, CoordKind::kDiscontinuous);
      for (int a = 0; a < 3; ++a) means.push_back(ctx.sample(loc, CoordKind::kContinuous));
      S w = beta * cum;
      weights.push_back(w);
      stick -= w;
    }
    std::size_t k_comp = weights.size();
    std::vector<S> log_w(k_comp);
    for (std::size_t k = 0; k < k_comp; ++k) log_w[k] = log(weights[k]);
    std::vector<S> comps(k_comp);
    for (const auto& x : data->points) {
      for (std::size_t k = 0; k < k_comp; ++k)
        comps[k] = log_w[k] + log_normal3(x, &means[3 * k]);
      ctx.factor(log_sum_exp(comps));
    }
    std::vector<S> out;
    out.reserve(1 + k_comp + means.size());
    out.push_back(S(static_cast<double>(k_comp)));
    for (const S& w : weights) out.push_back(w);
    for (const S& v : means) out.push_back(v);
    return out;
  });
  // sites repeat as [beta, theta_x, theta_y, theta_z] per component
  m.set_kind_map([](std::size_t i) {
    return i % 4 == 0 ? CoordKind::kDiscontinuous : CoordKind::kContinuous;
  });
  return m;
}

double gmm_point_log_lik(const std::vector<double>& value, const std::array<double, 3>& y) {
  int k_comp = static_cast<int>(value[0]);
  std::vector<double> log_w(static_cast<std::size_t>(k_comp),
                            -std::log(static_cast<double>(k_comp)));
  std::vector<double> means(value.begin() + 1, value.begin() + 1 + 3 * k_comp);
  return log_mixture(log_w, means, y);
}

double dpmm_point_log_lik(const std::vector<double>& value, const std::array<double, 3>& y) {
  std::size_t k_comp = static_cast<std::size_t>(value[0]);
  std::vector<double> w(value.begin() + 1, value.begin() + 1 + static_cast<long>(k_comp));
  // Renormalise over the emitted components (total mass > 1 - eps_cut).
  double total = 0.0;
  for (double x : w) total += x;
  std::vector<double> log_w(k_comp);
  for (std::size_t k = 0; k < k_comp; ++k) log_w[k] = std::log(w[k] / total);
  std::vector<double> means(value.begin() + 1 + static_cast<long>(k_comp), value.end());
  return log_mixture(log_w, means, y);
}

double true_point_log_lik(const Dataset3D& data, const std::array<double, 3>& y) {
  std::vector<double> log_w(static_cast<std::size_t>(data.true_k),
                            -std::log(static_cast<double>(data.true_k)));
  std::vector<double> means;
  means.reserve(3 * data.true_means.size());
  for (const auto& mu : data.true_means)
    for (double c : mu) means.push_back(c);
  return log_mixture(log_w, means, y);
}

}  // namespace nphmc

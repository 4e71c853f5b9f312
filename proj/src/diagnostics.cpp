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

#include "nphmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nphmc/tape.hpp"

namespace nphmc {

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

Histogram binned_histogram(const std::vector<double>& data, double lo, double hi,
                           std::size_t bins) {
  if (!(lo < hi) || bins == 0) throw std::invalid_argument("binned_histogram: bad bins");
  if (data.empty()) throw std::invalid_argument("binned_histogram: empty data");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.mass.assign(bins, 0.0);
  double w = 1.0 / static_cast<double>(data.size());
  for (double x : data) {
    double f = (x - lo) / (hi - lo) * static_cast<double>(bins);
    long b = std::clamp(static_cast<long>(std::floor(f)), 0l, static_cast<long>(bins) - 1);
    h.mass[static_cast<std::size_t>(b)] += w;
  }
  return h;
}

Histogram discrete_histogram(const std::vector<double>& data, int lo, int hi,
                             bool tail_bucket) {
  if (hi < lo) throw std::invalid_argument("discrete_histogram: bad support");
  if (data.empty()) throw std::invalid_argument("discrete_histogram: empty data");
  Histogram h;
  for (int k = lo; k <= hi; ++k) h.labels.push_back(k);
  if (tail_bucket) h.labels.push_back(static_cast<double>(hi) + 1.0);  // "> hi"
  h.mass.assign(h.labels.size(), 0.0);
  double w = 1.0 / static_cast<double>(data.size());
  for (double x : data) {
    long k = std::lround(x);
    if (k < lo) k = lo;
    std::size_t idx;
    if (k > hi) {
      if (!tail_bucket) continue;
      idx = h.labels.size() - 1;
    } else {
      idx = static_cast<std::size_t>(k - lo);
    }
    h.mass[idx] += w;
  }
  return h;
}

Histogram pmf_histogram(const std::function<double(int)>& pmf, int lo, int hi,
                        bool tail_bucket) {
  Histogram h;
  double acc = 0.0;
  for (int k = lo; k <= hi; ++k) {
    h.labels.push_back(k);
    double p = pmf(k);
    h.mass.push_back(p);
    acc += p;
  }
  if (tail_bucket) {
    h.labels.push_back(static_cast<double>(hi) + 1.0);
    h.mass.push_back(std::max(0.0, 1.0 - acc));
  }
  return h;
}

double tvd(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges || a.labels != b.labels || a.mass.size() != b.mass.size())
    throw std::invalid_argument("tvd: histograms must share one support");
  double s = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * s;
}

EssResult ess_autocorr(const std::vector<double>& series) {
  std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("ess_autocorr: need at least 10 points");
  double m = mean(series);
  double g0 = 0.0;
  for (double x : series) g0 += (x - m) * (x - m);
  g0 /= static_cast<double>(n);
  EssResult res;
  if (g0 == 0.0) {
    res.ess = res.raw = static_cast<double>(n);
    return res;
  }
  auto rho = [&](std::size_t t) {
    if (t >= n) return 0.0;
    double g = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) g += (series[i] - m) * (series[i + t] - m);
    return g / (static_cast<double>(n) * g0);
  };
  // Initial-positive-sequence rule: sum consecutive pairs
  // (rho_{2m} + rho_{2m+1}) from lag 0 and truncate at the first negative
  // pair, so tau = 1 + 2 sum_{t>=1} rho_t over the kept lags.
  double pair_sum = 0.0;
  for (std::size_t t = 0; t + 1 < n; t += 2) {
    double pair = rho(t) + rho(t + 1);
    if (pair < 0.0) break;
    pair_sum += pair;
  }
  double tau = -1.0 + 2.0 * pair_sum;
  res.raw = static_cast<double>(n) / tau;
  res.ess = res.raw;
  if (!(tau > 0.0) || res.raw > static_cast<double>(n)) {
    res.ess = static_cast<double>(n);
    res.clamped = true;
  }
  return res;
}

double ess_weighted(const std::vector<double>& weights) {
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("ess_weighted: negative weight");
    s += w;
    s2 += w * w;
  }
  if (s2 == 0.0) throw std::invalid_argument("ess_weighted: all weights are zero");
  return s * s / s2;
}

double lppd(std::size_t n_samples, std::size_t n_points,
            const std::function<double(std::size_t, std::size_t)>& loglik) {
  if (n_samples < 1 || n_points < 1) throw std::invalid_argument("lppd: empty input");
  double total = 0.0;
  std::vector<double> lls(n_samples);
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t j = 0; j < n_samples; ++j) lls[j] = loglik(j, i);
    total += log_sum_exp(lls) - std::log(static_cast<double>(n_samples));
  }
  return total;
}

std::vector<double> kde(const std::vector<double>& samples, const std::vector<double>& grid,
                        std::optional<double> bandwidth) {
  std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("kde: need at least 2 samples");
  double h;
  if (bandwidth) {
    h = *bandwidth;
  } else {
    double sd = std::sqrt(variance(samples));
    if (sd == 0.0) throw std::invalid_argument("kde: degenerate samples");
    h = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
  }
  if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * 3.14159265358979323846));
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double acc = 0.0;
    for (double x : samples) {
      double z = (grid[gi] - x) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out[gi] = norm * acc;
  }
  return out;
}

}  // namespace nphmc

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

#include <cmath>
#include <string>

namespace nphmc {

inline constexpr double kLogTwoPi = 1.8378770664093454836;
inline constexpr double kSqrtTwo = 1.4142135623730950488;

/// Standard normal density, cdf and quantile. The quantile uses a rational
/// approximation refined by one Newton step on the cdf (abs error < 1e-13
/// over the uniforms a 64-bit generator can produce).
double norm_pdf(double x);
double norm_log_pdf(double x);
double norm_cdf(double x);
double norm_inv_cdf(double u);

/// One-dimensional distribution primitives. All deterministic; sampling
/// happens elsewhere by pushing a standard-normal coordinate through
/// inv_cdf(cdf_normal(x)).
class Dist1D {
 public:
  enum class Family { kNormal, kUniform, kBeta1, kPoisson, kLaplace };

  static Dist1D normal(double mu, double sigma);
  static Dist1D uniform(double a, double b);
  static Dist1D beta1(double alpha);  // Beta(1, alpha)
  static Dist1D poisson(double lambda);
  static Dist1D laplace(double loc, double scale);

  Family family() const { return family_; }
  bool discrete() const { return family_ == Family::kPoisson; }
  double param0() const { return a_; }
  double param1() const { return b_; }

  /// Natural-log density (mass for Poisson); -inf outside the support.
  double log_pdf(double x) const;
  /// Monotone nondecreasing, in [0, 1].
  double cdf(double x) const;
  /// Quantile for u in (0,1); throws std::domain_error otherwise.
  /// For Poisson returns min{k : cdf(k) >= u}.
  double inv_cdf(double u) const;

  std::string describe() const;

 private:
  Dist1D(Family f, double a, double b) : family_(f), a_(a), b_(b) {}
  Family family_;
  double a_;
  double b_;
};

}  // namespace nphmc

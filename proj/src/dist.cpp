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

#include "nphmc/dist.hpp"

#include <limits>
#include <stdexcept>

namespace nphmc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x - 0.5 * kLogTwoPi); }

double norm_log_pdf(double x) { return -0.5 * x * x - 0.5 * kLogTwoPi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrtTwo); }

double norm_inv_cdf(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("norm_inv_cdf: u outside (0,1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    double q = u - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Newton step on the cdf.
  double e = norm_cdf(x) - u;
  x -= e / norm_pdf(x);
  return x;
}

Dist1D Dist1D::normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("Normal: sigma must be > 0");
  return Dist1D(Family::kNormal, mu, sigma);
}

Dist1D Dist1D::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("Uniform: requires a < b");
  return Dist1D(Family::kUniform, a, b);
}

Dist1D Dist1D::beta1(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("Beta1: alpha must be > 0");
  return Dist1D(Family::kBeta1, alpha, 0.0);
}

Dist1D Dist1D::poisson(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("Poisson: lambda must be > 0");
  return Dist1D(Family::kPoisson, lambda, 0.0);
}

Dist1D Dist1D::laplace(double loc, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("Laplace: scale must be > 0");
  return Dist1D(Family::kLaplace, loc, scale);
}

double Dist1D::log_pdf(double x) const {
  switch (family_) {
    case Family::kNormal: {
      double z = (x - a_) / b_;
      return -0.5 * z * z - 0.5 * kLogTwoPi - std::log(b_);
    }
    case Family::kUniform:
      return (x >= a_ && x <= b_) ? -std::log(b_ - a_) : -kInf;
    case Family::kBeta1: {
      if (x < 0.0 || x > 1.0) return -kInf;
      if (x == 1.0 && a_ < 1.0) return kInf;  // integrable singularity
      return std::log(a_) + (a_ - 1.0) * std::log1p(-x);
    }
    case Family::kPoisson: {
      double k = std::round(x);
      if (k < 0.0 || k != x) return -kInf;
      return k * std::log(a_) - a_ - std::lgamma(k + 1.0);
    }
    case Family::kLaplace:
      return -std::log(2.0 * b_) - std::abs(x - a_) / b_;
  }
  return -kInf;
}

double Dist1D::cdf(double x) const {
  switch (family_) {
    case Family::kNormal:
      return norm_cdf((x - a_) / b_);
    case Family::kUniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case Family::kBeta1:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return 1.0 - std::pow(1.0 - x, a_);
    case Family::kPoisson: {
      if (x < 0.0) return 0.0;
      double kmax = std::floor(x);
      double term = std::exp(-a_);
      double sum = term;
      for (double k = 1.0; k <= kmax; k += 1.0) {
        term *= a_ / k;
        sum += term;
      }
      return sum < 1.0 ? sum : 1.0;
    }
    case Family::kLaplace: {
      double z = (x - a_) / b_;
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
  }
  return 0.0;
}

double Dist1D::inv_cdf(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("inv_cdf: u outside (0,1)");
  switch (family_) {
    case Family::kNormal:
      return a_ + b_ * norm_inv_cdf(u);
    case Family::kUniform:
      return a_ + u * (b_ - a_);
    case Family::kBeta1:
      return 1.0 - std::pow(1.0 - u, 1.0 / a_);
    case Family::kPoisson: {
      // Quantile by cumulative pmf summation.
      double term = std::exp(-a_);
      double sum = term;
      double k = 0.0;
      while (sum < u) {
        k += 1.0;
        term *= a_ / k;
        sum += term;
        if (k > 1e9) break;  // unreachable for sane lambda and u < 1
      }
      return k;
    }
    case Family::kLaplace:
      return u < 0.5 ? a_ + b_ * std::log(2.0 * u) : a_ - b_ * std::log(2.0 * (1.0 - u));
  }
  return 0.0;
}

std::string Dist1D::describe() const {
  switch (family_) {
    case Family::kNormal:
      return "Normal(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
    case Family::kUniform:
      return "Uniform(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
    case Family::kBeta1:
      return "Beta(1, " + std::to_string(a_) + ")";
    case Family::kPoisson:
      return "Poisson(" + std::to_string(a_) + ")";
    case Family::kLaplace:
      return "Laplace(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
  }
  return "?";
}

}  // namespace nphmc

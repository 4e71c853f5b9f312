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
#include <cstdint>
#include <vector>

namespace nphmc {

class Tape;

/// Scalar recorded on a reverse-mode tape. id < 0 marks a constant that
/// carries no derivative. Model programs are written against a generic
/// scalar, so the same source runs untaped (double) and taped (Var).
struct Var {
  double v = 0.0;
  std::int32_t id = -1;
  Tape* tape = nullptr;

  Var() = default;
  Var(double value) : v(value) {}  // NOLINT: implicit constants are the point
  double value() const { return v; }
};

/// Reverse-mode tape of at-most-binary nodes. One model execution records a
/// tape; gradients of the accumulated log-weight fall out of one backward
/// sweep. Tapes are confined to a single execution and never shared.
class Tape {
 public:
  struct Node {
    double w0, w1;
    std::int32_t p0, p1;
  };

  Var input() {
    nodes_.push_back(Node{0.0, 0.0, -1, -1});
    return wrap(static_cast<std::int32_t>(nodes_.size() - 1), 0.0);
  }

  Var unary(double value, double w, std::int32_t parent) {
    nodes_.push_back(Node{w, 0.0, parent, -1});
    return wrap(static_cast<std::int32_t>(nodes_.size() - 1), value);
  }

  Var binary(double value, double w0, std::int32_t p0, double w1, std::int32_t p1) {
    nodes_.push_back(Node{w0, w1, p0, p1});
    return wrap(static_cast<std::int32_t>(nodes_.size() - 1), value);
  }

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  /// Adjoints of every node with respect to the node `root`.
  std::vector<double> backprop(std::int32_t root) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (root < 0) return adj;
    adj[static_cast<std::size_t>(root)] = 1.0;
    for (std::int32_t i = root; i >= 0; --i) {
      double a = adj[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      if (n.p0 >= 0) adj[static_cast<std::size_t>(n.p0)] += n.w0 * a;
      if (n.p1 >= 0) adj[static_cast<std::size_t>(n.p1)] += n.w1 * a;
    }
    return adj;
  }

 private:
  Var wrap(std::int32_t id, double value) {
    Var x;
    x.v = value;
    x.id = id;
    x.tape = this;
    return x;
  }

  std::vector<Node> nodes_;
};

namespace detail {
inline Tape* tape_of(const Var& a, const Var& b) { return a.tape ? a.tape : b.tape; }
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  Tape* t = detail::tape_of(a, b);
  double v = a.v + b.v;
  if (!t) return Var(v);
  if (a.id >= 0 && b.id >= 0) return t->binary(v, 1.0, a.id, 1.0, b.id);
  if (a.id >= 0) return t->unary(v, 1.0, a.id);
  return t->unary(v, 1.0, b.id);
}

inline Var operator-(const Var& a, const Var& b) {
  Tape* t = detail::tape_of(a, b);
  double v = a.v - b.v;
  if (!t) return Var(v);
  if (a.id >= 0 && b.id >= 0) return t->binary(v, 1.0, a.id, -1.0, b.id);
  if (a.id >= 0) return t->unary(v, 1.0, a.id);
  return t->unary(v, -1.0, b.id);
}

inline Var operator*(const Var& a, const Var& b) {
  Tape* t = detail::tape_of(a, b);
  double v = a.v * b.v;
  if (!t) return Var(v);
  if (a.id >= 0 && b.id >= 0) return t->binary(v, b.v, a.id, a.v, b.id);
  if (a.id >= 0) return t->unary(v, b.v, a.id);
  return t->unary(v, a.v, b.id);
}

inline Var operator/(const Var& a, const Var& b) {
  Tape* t = detail::tape_of(a, b);
  double v = a.v / b.v;
  if (!t) return Var(v);
  if (a.id >= 0 && b.id >= 0) return t->binary(v, 1.0 / b.v, a.id, -v / b.v, b.id);
  if (a.id >= 0) return t->unary(v, 1.0 / b.v, a.id);
  return t->unary(v, -v / b.v, b.id);
}

inline Var operator-(const Var& a) {
  if (!a.tape || a.id < 0) return Var(-a.v);
  return a.tape->unary(-a.v, -1.0, a.id);
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

inline bool operator<(const Var& a, const Var& b) { return a.v < b.v; }
inline bool operator<=(const Var& a, const Var& b) { return a.v <= b.v; }
inline bool operator>(const Var& a, const Var& b) { return a.v > b.v; }
inline bool operator>=(const Var& a, const Var& b) { return a.v >= b.v; }

inline Var exp(const Var& a) {
  double v = std::exp(a.v);
  if (!a.tape || a.id < 0) return Var(v);
  return a.tape->unary(v, v, a.id);
}

inline Var log(const Var& a) {
  double v = std::log(a.v);
  if (!a.tape || a.id < 0) return Var(v);
  return a.tape->unary(v, 1.0 / a.v, a.id);
}

inline Var sqrt(const Var& a) {
  double v = std::sqrt(a.v);
  if (!a.tape || a.id < 0) return Var(v);
  return a.tape->unary(v, 0.5 / v, a.id);
}

inline Var abs(const Var& a) {
  double v = std::abs(a.v);
  if (!a.tape || a.id < 0) return Var(v);
  return a.tape->unary(v, a.v < 0.0 ? -1.0 : 1.0, a.id);
}

inline Var pow(const Var& a, double e) {
  double v = std::pow(a.v, e);
  if (!a.tape || a.id < 0) return Var(v);
  return a.tape->unary(v, e * std::pow(a.v, e - 1.0), a.id);
}

/// Generic value extraction so model code can branch on either scalar type.
inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.v; }

/// Numerically stable log(sum(exp(xs))) for either scalar type.
template <class S>
S log_sum_exp(const std::vector<S>& xs) {
  using std::exp;
  using std::log;
  double m = value_of(xs[0]);
  for (const S& x : xs) m = std::max(m, value_of(x));
  S acc = S(0.0);
  for (const S& x : xs) acc += exp(x - S(m));
  return S(m) + log(acc);
}

}  // namespace nphmc

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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nphmc/dist.hpp"
#include "nphmc/tape.hpp"
#include "nphmc/trace.hpp"

namespace nphmc {

enum class RunStatus : std::uint8_t {
  kSuccess,       // program returned; log_weight finite
  kTooShort,      // replay exhausted the trace before the program returned
  kFailed,        // score of a nonpositive weight or a primitive-domain failure
  kExtendBudget,  // extending run appended more than the configured cap
};

/// Result of one model execution. The density of the model at q is
/// exp(log_weight) if status == kSuccess and consumed == |q|; a run that is
/// too short or leaves unconsumed coordinates has density 0.
struct RunOutcome {
  RunStatus status = RunStatus::kFailed;
  double log_weight = -std::numeric_limits<double>::infinity();
  std::size_t consumed = 0;
  std::vector<CoordKind> kinds;  // one per consumed coordinate
  std::vector<double> value;     // model return payload

  bool ok() const { return status == RunStatus::kSuccess; }
};

/// Supplies the next coordinate when an extending run exhausts its trace.
/// Called once per appended coordinate, in consumption order.
using Extender = std::function<double(std::size_t index, CoordKind kind)>;

namespace detail {

struct AbortRun {};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log pdf generic over the scalar type so observed data may carry
/// derivatives. Poisson data is treated as a constant (no useful derivative
/// through a pmf).
template <class S>
S log_pdf_generic(const Dist1D& d, const S& x) {
  using std::abs;
  using std::log;
  using Family = Dist1D::Family;
  switch (d.family()) {
    case Family::kNormal: {
      S z = (x - S(d.param0())) / S(d.param1());
      return S(-0.5) * z * z + S(-0.5 * kLogTwoPi - std::log(d.param1()));
    }
    case Family::kUniform: {
      double v = value_of(x);
      return S(v >= d.param0() && v <= d.param1() ? -std::log(d.param1() - d.param0())
                                                  : kNegInf);
    }
    case Family::kBeta1: {
      double v = value_of(x);
      if (v < 0.0 || v >= 1.0) return S(d.log_pdf(v));
      return S(std::log(d.param0())) + S(d.param0() - 1.0) * log(S(1.0) - x);
    }
    case Family::kLaplace:
      return S(-std::log(2.0 * d.param1())) + abs(x - S(d.param0())) / S(-d.param1());
    case Family::kPoisson:
      return S(d.log_pdf(value_of(x)));
  }
  return S(kNegInf);
}

}  // namespace detail

/// Execution context threaded through one model run. Confined to that run;
/// never shared. S is double for plain evaluation or Var for a taped run.
template <class S>
class RunContext {
 public:
  using scalar_type = S;
  enum class Mode : std::uint8_t { kReplay, kExtending };

  RunContext(Mode mode, Trace trace, const Extender* extender, std::size_t extend_cap,
             Tape* tape)
      : mode_(mode),
        trace_(std::move(trace)),
        extender_(extender),
        extend_cap_(extend_cap),
        tape_(tape) {
    log_weight_ = S(0.0);
  }

  /// Reads one trace coordinate x and returns inv_cdf_d(cdf_normal(x)).
  /// The Gaussian base density of x is not part of the weight; the trace
  /// measure already carries it.
  S sample(const Dist1D& d, CoordKind kind) {
    if (cursor_ == trace_.size()) {
      if (mode_ == Mode::kReplay) {
        status_ = RunStatus::kTooShort;
        throw detail::AbortRun{};
      }
      if (appended_ >= extend_cap_) {
        status_ = RunStatus::kExtendBudget;
        throw detail::AbortRun{};
      }
      trace_.push_back((*extender_)(cursor_, kind));
      ++appended_;
    }
    double x = trace_[cursor_];
    if (!std::isfinite(x)) throw std::invalid_argument("trace coordinate is NaN or infinite");
    double u = std::clamp(norm_cdf(x), 1e-300, 1.0 - 0x1.0p-53);
    double v = d.inv_cdf(u);
    kinds_.push_back(kind);
    S out;
    if constexpr (std::is_same_v<S, Var>) {
      if (kind == CoordKind::kContinuous) {
        Var in = tape_->input();
        coord_nodes_.push_back(in.id);
        double pdf_v = std::exp(d.log_pdf(v));
        double dvdx = pdf_v > 0.0 ? norm_pdf(x) / pdf_v : 0.0;
        out = tape_->unary(v, dvdx, in.id);
      } else {
        coord_nodes_.push_back(-1);
        out = Var(v);
      }
    } else {
      out = v;
    }
    ++cursor_;
    return out;
  }

  /// Multiplies the weight by pdf_d(datum); a zero density fails the run.
  template <class T>
  void observe(const Dist1D& d, const T& datum) {
    factor(detail::log_pdf_generic<S>(d, S(datum)));
  }

  /// Adds lw to the accumulated log-weight. -inf or NaN fails the run,
  /// mirroring a score of a nonpositive constant.
  void factor(const S& lw) {
    double v = value_of(lw);
    if (std::isnan(v) || v == detail::kNegInf) {
      status_ = RunStatus::kFailed;
      throw detail::AbortRun{};
    }
    log_weight_ += lw;
  }

  std::size_t cursor() const { return cursor_; }

  // Harness access.
  RunStatus status() const { return status_; }
  const S& log_weight() const { return log_weight_; }
  const Trace& trace() const { return trace_; }
  std::vector<CoordKind>& kinds() { return kinds_; }
  std::vector<std::int32_t>& coord_nodes() { return coord_nodes_; }

 private:
  Mode mode_;
  Trace trace_;
  std::size_t cursor_ = 0;
  std::vector<CoordKind> kinds_;
  S log_weight_;
  RunStatus status_ = RunStatus::kSuccess;
  const Extender* extender_ = nullptr;
  std::size_t extend_cap_ = 0;
  std::size_t appended_ = 0;
  Tape* tape_ = nullptr;
  std::vector<std::int32_t> coord_nodes_;
};

/// Result of a taped execution; the tape plus the node ids needed to read
/// d(log_weight)/d(coordinate) off a backward sweep.
struct TapedRun {
  RunOutcome outcome;
  Tape tape;
  std::vector<std::int32_t> coord_nodes;  // -1 at discontinuous sites
  std::int32_t weight_node = -1;
};

/// An executable tree-representable density: a deterministic program over a
/// RunContext, consuming trace coordinates at sample sites and accumulating
/// log-weight at observe/factor sites. Re-running on equal consumed
/// coordinates yields identical outcomes.
class Model {
 public:
  template <class Program>
  Model(std::string name, Program program)
      : name_(std::move(name)),
        plain_([program](RunContext<double>& ctx) { return program(ctx); }),
        taped_([program](RunContext<Var>& ctx) { return program(ctx); }) {}

  const std::string& name() const { return name_; }

  /// Executes consuming q. Leftover coordinates are reported through
  /// consumed < |q|, not an error; density semantics live in log_density().
  RunOutcome replay(const Trace& q) const;

  /// Executes growing q on demand through the extender. The grown trace
  /// replayed gives an identical outcome.
  std::pair<RunOutcome, Trace> run_extending(const Trace& q, const Extender& extender,
                                             std::size_t extend_cap) const;

  /// Replay recorded on a reverse-mode tape (gradients of the log-weight).
  TapedRun replay_taped(const Trace& q) const;

  /// Optional axis-aligned branch thresholds (coordinate i branches at
  /// x_i < threshold(i)), consumed by the reflective integrator's built-in
  /// boundary oracle. Unset for models without that structure.
  void set_axis_thresholds(std::function<std::optional<double>(std::size_t)> f) {
    axis_thresholds_ = std::move(f);
  }
  const std::function<std::optional<double>(std::size_t)>& axis_thresholds() const {
    return axis_thresholds_;
  }

  /// Static coordinate-kind map: the discontinuous HMC variants assume each
  /// index is continuous or discontinuous irrespective of the executed path,
  /// and the integrators need the tag for coordinates beyond the supported
  /// prefix of a state. Defaults to the per-run tags with a continuous
  /// fallback when unset.
  void set_kind_map(std::function<CoordKind(std::size_t)> f) { kind_map_ = std::move(f); }
  const std::function<CoordKind(std::size_t)>& kind_map() const { return kind_map_; }

 private:
  std::string name_;
  std::function<std::vector<double>(RunContext<double>&)> plain_;
  std::function<std::vector<Var>(RunContext<Var>&)> taped_;
  std::function<std::optional<double>(std::size_t)> axis_thresholds_;
  std::function<CoordKind(std::size_t)> kind_map_;
};

/// log density(m, q): log_weight when the run succeeded consuming exactly
/// |q|, else -inf (too short and leftover coordinates both give density 0).
double log_density(const Model& m, const Trace& q);

}  // namespace nphmc

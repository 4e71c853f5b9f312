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

#include "nphmc/nphmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nphmc/dist.hpp"

namespace nphmc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void axpy(Trace& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}
}  // namespace

void validate(const SamplerConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
  if (cfg.steps < 0) throw std::invalid_argument("config: steps must be >= 0");
  if (cfg.n_samples < 1) throw std::invalid_argument("config: n_samples must be >= 1");
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.n_samples)
    throw std::invalid_argument("config: requires 0 <= burn_in < n_samples");
  if (cfg.thinning < 1) throw std::invalid_argument("config: thinning must be >= 1");
}

ExtendStatus extend_states(const Model& m, State& current, State& initial,
                           std::vector<CoordKind>& kinds, double t_cont, double t_disc,
                           RandomSource& rng, const ExtendOptions& opt, RunOutcome* run_out) {
  Extender hook = [&](std::size_t, CoordKind kind) -> double {
    double x0 = rng.normal();
    double x, y0;
    if (opt.mixed && kind == CoordKind::kDiscontinuous) {
      // Laplace momentum moves the position at unit speed, so catching the
      // coordinate up to the current time shifts it by t sign(y0); anything
      // else breaks the reverse-trajectory involution the Hastings ratio
      // relies on.
      y0 = rng.laplace();
      x = x0 + t_disc * (y0 > 0.0 ? 1.0 : (y0 < 0.0 ? -1.0 : 0.0));
    } else {
      y0 = rng.normal();
      x = x0 + t_cont * y0;
    }
    initial.q.push_back(x0);
    initial.p.push_back(y0);
    current.p.push_back(y0);
    return x;
  };
  auto [out, grown] = m.run_extending(current.q, hook, opt.cap);
  current.q = std::move(grown);
  if (run_out) *run_out = out;
  if (out.status == RunStatus::kExtendBudget) return ExtendStatus::kBudgetExceeded;
  if (!out.ok()) return ExtendStatus::kUnsupported;

  // Appends are demanded by execution, so they all lie inside the consumed
  // prefix; leftover coordinates keep their previously recorded kinds.
  kinds.resize(current.q.size(), CoordKind::kContinuous);
  for (std::size_t i = 0; i < out.consumed; ++i) kinds[i] = out.kinds[i];

  if (opt.trim) {
    std::size_t keep = std::max(out.consumed, opt.min_len);
    if (keep < current.q.size()) {
      current.q.resize(keep);
      current.p.resize(keep);
      initial.q.resize(keep);
      initial.p.resize(keep);
      kinds.resize(keep);
    }
  }
  return ExtendStatus::kOk;
}

ExtendResult extend(const State& current, const State& initial, double t, const Model& m,
                    RandomSource& rng, std::size_t cap) {
  ExtendResult res{current, initial, ExtendStatus::kOk};
  std::vector<CoordKind> kinds(current.q.size(), CoordKind::kContinuous);
  ExtendOptions opt;
  opt.cap = cap;
  res.status = extend_states(m, res.current, res.initial, kinds, t, t, rng, opt);
  return res;
}

namespace detail_np {

// Per-index kinds for a state: the executed path's tags, with the model's
// static kind map (or a continuous fallback) covering leftover indices.
std::vector<CoordKind> entry_kinds(const Model& m, const RunOutcome& run, std::size_t len) {
  std::vector<CoordKind> kinds(len, CoordKind::kContinuous);
  if (m.kind_map()) {
    for (std::size_t i = 0; i < len; ++i) kinds[i] = m.kind_map()(i);
  }
  for (std::size_t i = 0; i < run.consumed && i < len; ++i) kinds[i] = run.kinds[i];
  return kinds;
}

// One leapfrog iteration of the NP integrator. grad holds dU at the current
// position on entry and at the (possibly extended) new position on exit.
bool np_leapfrog_iter(const Model& m, State& cur, State& init, std::vector<CoordKind>& kinds,
                      GradResult& grad, int i, const SamplerConfig& cfg,
                      const ExtendOptions& eopt, RandomSource& rng, std::string& reason,
                      RunOutcome* run_out) {
  axpy(cur.p, -0.5 * cfg.epsilon, grad.grad.partials);
  axpy(cur.q, cfg.epsilon, cur.p);
  double t_elapsed = (i + 1) * cfg.epsilon;
  ExtendStatus es =
      extend_states(m, cur, init, kinds, t_elapsed, t_elapsed, rng, eopt, run_out);
  if (es != ExtendStatus::kOk) {
    reason = es == ExtendStatus::kBudgetExceeded ? "extend-budget" : "unsupported";
    return false;
  }
  grad = grad_potential(m, cur.q);
  if (!grad.ok()) {
    reason = grad.status == GradStatus::kNumericalFailure ? "gradient-failure" : "out-of-domain";
    return false;
  }
  axpy(cur.p, -0.5 * cfg.epsilon, grad.grad.partials);
  return true;
}

}  // namespace detail_np

IntegrateResult np_integrate(const State& start, const Model& m, const SamplerConfig& cfg,
                             RandomSource& rng) {
  IntegrateResult res;
  RunOutcome r0 = m.replay(start.q);
  if (!r0.ok()) {
    res.reason = "start unsupported";
    return res;
  }
  res.kinds = detail_np::entry_kinds(m, r0, start.q.size());

  ExtendOptions eopt;
  eopt.cap = cfg.extend_cap;
  eopt.mixed = false;
  eopt.trim = cfg.trim;
  eopt.min_len = r0.consumed;

  State cur = start;
  State init = start;
  GradResult g = grad_potential(m, cur.q);
  if (!g.ok()) {
    res.reason = "gradient-failure";
    return res;
  }
  for (int i = 0; i < cfg.steps; ++i) {
    if (!detail_np::np_leapfrog_iter(m, cur, init, res.kinds, g, i, cfg, eopt, rng, res.reason,
                                     nullptr)) {
      return res;
    }
  }
  for (double& p : cur.p) p = -p;
  res.proposal = std::move(cur);
  res.initial = std::move(init);
  res.ok = true;
  return res;
}

namespace {

double momentum_log_density(const Trace& p, const std::vector<CoordKind>* kinds, bool mixed) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (mixed && kinds && (*kinds)[i] == CoordKind::kDiscontinuous) {
      acc += -std::log(2.0) - std::abs(p[i]);
    } else {
      acc += norm_log_pdf(p[i]);
    }
  }
  return acc;
}

double accept_ratio_impl(const State& proposal, const State& initial, const Model& m,
                         const std::vector<CoordKind>* kinds, bool mixed) {
  if (proposal.q.size() != initial.q.size())
    throw std::invalid_argument("acceptance ratio: states must share one extended length");
  double lw_prop = log_truncation(m, proposal.q);
  if (lw_prop == kNegInf) return kNegInf;
  double lw_init = log_truncation(m, initial.q);
  if (lw_init == kNegInf) return std::numeric_limits<double>::infinity();
  double num = lw_prop + log_base_density(proposal.q) +
               momentum_log_density(proposal.p, kinds, mixed);
  double den = lw_init + log_base_density(initial.q) +
               momentum_log_density(initial.p, kinds, mixed);
  return num - den;
}

}  // namespace

double acceptance_log_ratio(const State& proposal, const State& initial, const Model& m) {
  return accept_ratio_impl(proposal, initial, m, nullptr, false);
}

double acceptance_log_ratio_mixed(const State& proposal, const State& initial,
                                  const std::vector<CoordKind>& kinds, const Model& m,
                                  bool laplace_on_discontinuous) {
  return accept_ratio_impl(proposal, initial, m, &kinds, laplace_on_discontinuous);
}

StepResult nphmc_step(const Trace& q0, const Model& m, const SamplerConfig& cfg,
                      RandomSource& rng) {
  check_finite(q0, "nphmc_step");
  RunOutcome r0 = m.replay(q0);
  if (!r0.ok()) throw std::invalid_argument("nphmc_step: current trace is unsupported");
  Trace q = prefix(q0, r0.consumed);

  State s;
  s.q = q;
  s.p.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) s.p.push_back(rng.normal());

  IntegrateResult ir = np_integrate(s, m, cfg, rng);
  if (!ir.ok) return {std::move(q), r0.value, false, ir.reason};

  double log_ratio = acceptance_log_ratio(ir.proposal, ir.initial, m);
  double u = rng.uniform();
  bool accepted = std::log(u) < std::min(0.0, log_ratio);
  const State& chosen = accepted ? ir.proposal : ir.initial;
  RunOutcome rc = m.replay(chosen.q);
  if (!rc.ok()) return {std::move(q), r0.value, false, "chosen state unsupported"};
  return {prefix(chosen.q, rc.consumed), rc.value, accepted, ""};
}

Trace initial_trace(const Model& m, const SamplerConfig& cfg, RandomSource& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Extender hook = [&](std::size_t, CoordKind) { return rng.normal(); };
    auto [out, grown] = m.run_extending(Trace{}, hook, cfg.extend_cap);
    if (out.ok()) return grown;
    if (out.status == RunStatus::kExtendBudget)
      throw std::runtime_error("chain initialisation exceeded the extension budget");
  }
  throw std::runtime_error("chain initialisation failed: no supported prior run in 1000 tries");
}

std::vector<ChainSample> run_chain_with(const Model& m, const SamplerConfig& cfg,
                                        RandomSource& rng, const StepFn& step) {
  validate(cfg);
  Trace q = initial_trace(m, cfg, rng);
  std::vector<ChainSample> out;
  out.reserve(static_cast<std::size_t>(cfg.n_samples - cfg.burn_in));
  long total = static_cast<long>(cfg.n_samples) * cfg.thinning;
  long kept = 0;
  for (long i = 0; i < total; ++i) {
    StepResult sr = step(q, m, cfg, rng);
    q = sr.trace;
    if ((i + 1) % cfg.thinning == 0) {
      if (kept >= cfg.burn_in) out.push_back({q, std::move(sr.value), sr.accepted});
      ++kept;
    }
  }
  return out;
}

std::vector<ChainSample> run_chain(const Model& m, const SamplerConfig& cfg, RandomSource& rng) {
  return run_chain_with(m, cfg, rng,
                        [](const Trace& q, const Model& mm, const SamplerConfig& c,
                           RandomSource& r) { return nphmc_step(q, mm, c, r); });
}

bool validstate(const State& s, const Model& m, const SamplerConfig& cfg) {
  State c = s;
  GradResult g = grad_potential(m, c.q);
  if (!g.ok()) return false;
  for (int i = 0; i < cfg.steps; ++i) {
    axpy(c.p, -0.5 * cfg.epsilon, g.grad.partials);
    axpy(c.q, cfg.epsilon, c.p);
    g = grad_potential(m, c.q);
    if (!g.ok()) return false;
    axpy(c.p, -0.5 * cfg.epsilon, g.grad.partials);
  }
  return true;
}

State hmc_integrate(const State& start, const Model& m, const SamplerConfig& cfg) {
  State c = start;
  GradResult g = grad_potential(m, c.q);
  if (!g.ok()) throw std::invalid_argument("hmc_integrate: start outside the support");
  for (int i = 0; i < cfg.steps; ++i) {
    axpy(c.p, -0.5 * cfg.epsilon, g.grad.partials);
    axpy(c.q, cfg.epsilon, c.p);
    g = grad_potential(m, c.q);
    if (!g.ok()) throw std::invalid_argument("hmc_integrate: left the support mid-trajectory");
    axpy(c.p, -0.5 * cfg.epsilon, g.grad.partials);
  }
  for (double& p : c.p) p = -p;
  return c;
}

State enphmc_step(const State& s, const Model& m, const SamplerConfig& cfg, RandomSource& rng) {
  RunOutcome r0 = m.replay(s.q);
  if (!r0.ok()) throw std::invalid_argument("enphmc_step: current trace is unsupported");
  State st;
  st.q = prefix(s.q, r0.consumed);
  st.p.reserve(st.q.size());
  for (std::size_t i = 0; i < st.q.size(); ++i) st.p.push_back(rng.normal());

  std::size_t appended = 0;
  while (!validstate(st, m, cfg)) {
    if (appended >= cfg.extend_cap)
      throw std::runtime_error("enphmc_step: search exceeded the extension budget");
    st.q.push_back(rng.normal());
    st.p.push_back(rng.normal());
    ++appended;
  }

  State prop = hmc_integrate(st, m, cfg);
  double log_ratio = acceptance_log_ratio(prop, st, m);
  double u = rng.uniform();
  return std::log(u) < std::min(0.0, log_ratio) ? prop : st;
}

}  // namespace nphmc

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

#include "nphmc/npdhmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace nphmc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

bool any_continuous(const std::vector<CoordKind>& kinds, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (kinds[i] == CoordKind::kContinuous) return true;
  return false;
}

void fisher_yates(std::vector<std::size_t>& v, RandomSource& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.uniform_index(i);
    std::swap(v[i - 1], v[j]);
  }
}
}  // namespace

namespace detail_np {
bool np_leapfrog_iter(const Model& m, State& cur, State& init, std::vector<CoordKind>& kinds,
                      GradResult& grad, int i, const SamplerConfig& cfg,
                      const ExtendOptions& eopt, RandomSource& rng, std::string& reason,
                      RunOutcome* run_out);
std::vector<CoordKind> entry_kinds(const Model& m, const RunOutcome& run, std::size_t len);
}  // namespace detail_np

ExtendStatus extend_mixed(const Model& m, State& current, State& initial,
                          std::vector<CoordKind>& kinds, double t_cont, double t_disc,
                          RandomSource& rng, const ExtendOptions& opt, RunOutcome* run_out) {
  ExtendOptions o = opt;
  o.mixed = true;
  return extend_states(m, current, initial, kinds, t_cont, t_disc, rng, o, run_out);
}

CoordUpdate coord_integrator(const Model& m, State& cur, State& init,
                             std::vector<CoordKind>& kinds, std::size_t j, double t_cont,
                             double t_disc, double epsilon, RandomSource& rng,
                             const ExtendOptions& opt, double& u_current) {
  double pj = cur.p[j];
  double s = sign(pj);

  State cur_star = cur;
  State init_star = init;
  std::vector<CoordKind> kinds_star = kinds;
  cur_star.q[j] += epsilon * s;

  RunOutcome ro;
  ExtendStatus es = extend_mixed(m, cur_star, init_star, kinds_star, t_cont, t_disc, rng, opt, &ro);
  double du = es == ExtendStatus::kOk ? (-ro.log_weight) - u_current : kInf;

  if (std::abs(pj) > du) {
    cur = std::move(cur_star);
    init = std::move(init_star);
    kinds = std::move(kinds_star);
    cur.p[j] = pj - s * du;
    u_current += du;
    return {true, du};
  }
  cur.p[j] = -pj;
  return {false, du};
}

IntegrateResult npdhmc_integrate(const State& start, const Model& m, const SamplerConfig& cfg,
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
  eopt.mixed = true;
  eopt.trim = cfg.trim;
  eopt.min_len = r0.consumed;

  State cur = start;
  State init = start;
  double u_current = -r0.log_weight;

  GradResult g;
  bool have_grad = false;
  auto refresh_grad = [&]() -> bool {
    g = grad_potential(m, cur.q);
    have_grad = g.ok();
    if (!have_grad)
      res.reason =
          g.status == GradStatus::kNumericalFailure ? "gradient-failure" : "out-of-domain";
    return have_grad;
  };

  for (int i = 0; i < cfg.steps; ++i) {
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < cur.q.size(); ++j)
      if (res.kinds[j] == CoordKind::kDiscontinuous) live.push_back(j);

    if (live.empty()) {
      // Pure continuous iteration: identical to the plain NP integrator.
      if (!have_grad && !refresh_grad()) return res;
      RunOutcome ru;
      if (!detail_np::np_leapfrog_iter(m, cur, init, res.kinds, g, i, cfg, eopt, rng,
                                       res.reason, &ru)) {
        return res;
      }
      u_current = -ru.log_weight;
      continue;
    }

    bool has_c = any_continuous(res.kinds, cur.q.size());
    // Elapsed times a coordinate appended now must be caught up by:
    // discontinuous coordinates join the sweeps of later iterations only
    // (i+1 sweeps missed); continuous ones appended before the second
    // position half-step have i + 1/2 iterations of motion behind them.
    double t_c_early = (i + 0.5) * cfg.epsilon;
    double t_c_late = (i + 1) * cfg.epsilon;
    double t_d = (i + 1) * cfg.epsilon;
    if (has_c) {
      if (!have_grad && !refresh_grad()) return res;
      for (std::size_t j = 0; j < cur.q.size(); ++j)
        cur.p[j] -= 0.5 * cfg.epsilon * g.grad.partials[j];
      for (std::size_t j = 0; j < cur.q.size(); ++j)
        if (res.kinds[j] == CoordKind::kContinuous) cur.q[j] += 0.5 * cfg.epsilon * cur.p[j];
      RunOutcome ru;
      ExtendStatus es = extend_mixed(m, cur, init, res.kinds, t_c_early, t_d, rng, eopt, &ru);
      if (es != ExtendStatus::kOk) {
        res.reason = es == ExtendStatus::kBudgetExceeded ? "extend-budget" : "unsupported";
        return res;
      }
      u_current = -ru.log_weight;
    }

    fisher_yates(live, rng);
    for (std::size_t j : live) {
      // The sweep may shrink or grow the state; stale indices drop out.
      if (j >= cur.q.size()) continue;
      if (res.kinds[j] != CoordKind::kDiscontinuous) continue;
      coord_integrator(m, cur, init, res.kinds, j, t_c_early, t_d, cfg.epsilon, rng, eopt,
                       u_current);
    }

    has_c = any_continuous(res.kinds, cur.q.size());
    if (has_c) {
      for (std::size_t j = 0; j < cur.q.size(); ++j)
        if (res.kinds[j] == CoordKind::kContinuous) cur.q[j] += 0.5 * cfg.epsilon * cur.p[j];
      RunOutcome ru;
      ExtendStatus es = extend_mixed(m, cur, init, res.kinds, t_c_late, t_d, rng, eopt, &ru);
      if (es != ExtendStatus::kOk) {
        res.reason = es == ExtendStatus::kBudgetExceeded ? "extend-budget" : "unsupported";
        return res;
      }
      u_current = -ru.log_weight;
      if (!refresh_grad()) return res;
      for (std::size_t j = 0; j < cur.q.size(); ++j)
        cur.p[j] -= 0.5 * cfg.epsilon * g.grad.partials[j];
    } else {
      have_grad = false;
    }
  }

  for (double& p : cur.p) p = -p;
  res.proposal = std::move(cur);
  res.initial = std::move(init);
  res.ok = true;
  return res;
}

StepResult npdhmc_step(const Trace& q0, const Model& m, const SamplerConfig& cfg,
                       RandomSource& rng) {
  check_finite(q0, "npdhmc_step");
  RunOutcome r0 = m.replay(q0);
  if (!r0.ok()) throw std::invalid_argument("npdhmc_step: current trace is unsupported");
  Trace q = prefix(q0, r0.consumed);

  State s;
  s.q = q;
  s.p.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    s.p.push_back(r0.kinds[i] == CoordKind::kDiscontinuous ? rng.laplace() : rng.normal());
  }

  IntegrateResult ir = npdhmc_integrate(s, m, cfg, rng);
  if (!ir.ok) return {std::move(q), r0.value, false, ir.reason};

  double log_ratio =
      acceptance_log_ratio_mixed(ir.proposal, ir.initial, ir.kinds, m, cfg.mixed_accept);
  double u = rng.uniform();
  bool accepted = std::log(u) < std::min(0.0, log_ratio);
  const State& chosen = accepted ? ir.proposal : ir.initial;
  RunOutcome rc = m.replay(chosen.q);
  if (!rc.ok()) return {std::move(q), r0.value, false, "chosen state unsupported"};
  return {prefix(chosen.q, rc.consumed), rc.value, accepted, ""};
}

std::vector<ChainSample> run_chain_npdhmc(const Model& m, const SamplerConfig& cfg,
                                          RandomSource& rng) {
  return run_chain_with(m, cfg, rng,
                        [](const Trace& q, const Model& mm, const SamplerConfig& c,
                           RandomSource& r) { return npdhmc_step(q, mm, c, r); });
}

}  // namespace nphmc

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

#include "nphmc/nprhmc.hpp"

#include <cmath>
#include <limits>

namespace nphmc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void axpy(Trace& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double sq_norm(const Trace& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}
}  // namespace

BoundaryOracle axis_threshold_oracle(
    std::function<std::optional<double>(std::size_t)> thresholds) {
  BoundaryOracle oracle;
  oracle.next_boundary = [thresholds](const Trace& q, const Trace& p, double limit,
                                      const Model&) -> std::optional<BoundaryHit> {
    std::optional<std::size_t> best;
    double best_t = limit;
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto thr = thresholds(i);
      if (!thr || p[i] == 0.0) continue;
      double dt = (*thr - q[i]) / p[i];
      if (dt > 0.0 && dt <= best_t && (!best || dt < best_t)) {
        best = i;
        best_t = dt;
      }
    }
    if (!best) return std::nullopt;
    BoundaryHit hit;
    hit.t_hit = best_t;
    hit.q_before = q;
    axpy(hit.q_before, best_t, p);
    hit.q_after = hit.q_before;
    double thr = *thresholds(*best);
    double dir = p[*best] > 0.0 ? 1.0 : -1.0;
    // The probe points must sit far enough off the wall to survive the
    // quantile roundtrip inside the sample transform (~1e-16 relative),
    // yet close enough to be physically negligible.
    double nudge = 1e-11 * std::max(1.0, std::abs(thr));
    hit.q_before[*best] = thr - dir * nudge;
    hit.q_after[*best] = thr + dir * nudge;
    return hit;
  };
  oracle.decompose = [thresholds](const Trace& q, const Trace& p,
                                  const Model&) -> std::pair<Trace, Trace> {
    // The hit axis is the one sitting on (within rounding of) its threshold.
    std::size_t axis = 0;
    double best = kInf;
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto thr = thresholds(i);
      if (!thr) continue;
      double d = std::abs(q[i] - *thr);
      if (d < best) {
        best = d;
        axis = i;
      }
    }
    Trace parallel = p;
    Trace perp(p.size(), 0.0);
    perp[axis] = p[axis];
    parallel[axis] = 0.0;
    return {parallel, perp};
  };
  return oracle;
}

IntegrateResult nprhmc_integrate(const State& start, const Model& m,
                                 const BoundaryOracle& oracle, const SamplerConfig& cfg,
                                 RandomSource& rng) {
  IntegrateResult res;
  RunOutcome r0 = m.replay(start.q);
  if (!r0.ok()) {
    res.reason = "start unsupported";
    return res;
  }
  {
    std::vector<CoordKind> kinds(start.q.size(), CoordKind::kContinuous);
    if (m.kind_map()) {
      for (std::size_t i = 0; i < kinds.size(); ++i) kinds[i] = m.kind_map()(i);
    }
    for (std::size_t i = 0; i < r0.consumed; ++i) kinds[i] = r0.kinds[i];
    res.kinds = std::move(kinds);
  }

  ExtendOptions eopt;
  eopt.cap = cfg.extend_cap;
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
    axpy(cur.p, -0.5 * cfg.epsilon, g.grad.partials);

    double t = 0.0;
    int guard = 0;
    while (auto hit = oracle.next_boundary(cur.q, cur.p, cfg.epsilon - t, m)) {
      if (++guard > 1000)
        throw OracleContractViolation("next_boundary keeps reporting hits; oracle inconsistent");
      if (!(hit->t_hit > 0.0) || hit->t_hit > cfg.epsilon - t + 1e-12)
        throw OracleContractViolation("next_boundary returned a hit time outside (0, T]");
      t += hit->t_hit;

      double u_before;
      {
        double lw = log_truncation(m, hit->q_before);
        u_before = lw == -kInf ? kInf : -lw;
      }

      State star;
      star.q = hit->q_after;
      star.p = cur.p;
      State init_star = init;
      std::vector<CoordKind> kinds_star = res.kinds;
      RunOutcome ro;
      ExtendStatus es =
          extend_states(m, star, init_star, kinds_star, i * cfg.epsilon + t,
                        i * cfg.epsilon + t, rng, eopt, &ro);
      double du = (es == ExtendStatus::kOk && u_before < kInf) ? (-ro.log_weight) - u_before
                                                               : kInf;

      auto [par_star, perp_star] = oracle.decompose(star.q, star.p, m);
      double perp_sq = sq_norm(perp_star);
      if (perp_sq > 2.0 * du && perp_sq > 0.0) {
        // Refraction: scale the perpendicular component down by the energy
        // spent climbing the potential jump.
        double scale = std::sqrt(perp_sq - 2.0 * du) / std::sqrt(perp_sq);
        cur.q = std::move(star.q);
        cur.p = par_star;
        for (std::size_t k = 0; k < cur.p.size(); ++k) cur.p[k] += scale * perp_star[k];
        init = std::move(init_star);
        res.kinds = std::move(kinds_star);
      } else {
        // Reflection: stay on the incoming side, flip the perpendicular
        // component; the speculative extension is discarded.
        auto [par, perp] = oracle.decompose(hit->q_before, cur.p, m);
        cur.q = hit->q_before;
        for (std::size_t k = 0; k < cur.p.size(); ++k) cur.p[k] = par[k] - perp[k];
      }
    }

    axpy(cur.q, cfg.epsilon - t, cur.p);
    // The oracle is assumed consistent with the support, so the residual
    // motion stays inside; extend anyway in case rounding says otherwise.
    RunOutcome ru;
    ExtendStatus es =
        extend_states(m, cur, init, res.kinds, (i + 1) * cfg.epsilon, (i + 1) * cfg.epsilon,
                      rng, eopt, &ru);
    if (es != ExtendStatus::kOk) {
      res.reason = es == ExtendStatus::kBudgetExceeded ? "extend-budget" : "unsupported";
      return res;
    }

    g = grad_potential(m, cur.q);
    if (!g.ok()) {
      res.reason = "gradient-failure";
      return res;
    }
    axpy(cur.p, -0.5 * cfg.epsilon, g.grad.partials);
  }

  for (double& p : cur.p) p = -p;
  res.proposal = std::move(cur);
  res.initial = std::move(init);
  res.ok = true;
  return res;
}

StepResult nprhmc_step(const Trace& q0, const Model& m, const BoundaryOracle& oracle,
                       const SamplerConfig& cfg, RandomSource& rng) {
  check_finite(q0, "nprhmc_step");
  RunOutcome r0 = m.replay(q0);
  if (!r0.ok()) throw std::invalid_argument("nprhmc_step: current trace is unsupported");
  Trace q = prefix(q0, r0.consumed);

  State s;
  s.q = q;
  s.p.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) s.p.push_back(rng.normal());

  IntegrateResult ir = nprhmc_integrate(s, m, oracle, cfg, rng);
  if (!ir.ok) return {std::move(q), r0.value, false, ir.reason};

  double log_ratio = acceptance_log_ratio(ir.proposal, ir.initial, m);
  double u = rng.uniform();
  bool accepted = std::log(u) < std::min(0.0, log_ratio);
  const State& chosen = accepted ? ir.proposal : ir.initial;
  RunOutcome rc = m.replay(chosen.q);
  if (!rc.ok()) return {std::move(q), r0.value, false, "chosen state unsupported"};
  return {prefix(chosen.q, rc.consumed), rc.value, accepted, ""};
}

}  // namespace nphmc

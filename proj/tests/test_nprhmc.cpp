#include <doctest.h>

#include <cmath>
#include <limits>
#include <optional>

#include "nphmc/models.hpp"
#include "nphmc/nprhmc.hpp"
#include "testlib.hpp"

using namespace nphmc;
using nphmc::testlib::ScriptedStream;

namespace {

// Fixed-height step potential on one coordinate: U = c for x >= 0, else 0.
Model one_step(double c) {
  return Model("one-step", [c](auto& ctx) {
    using S = typename std::decay_t<decltype(ctx)>::scalar_type;
    S x = ctx.sample(Dist1D::normal(0, 1), CoordKind::kDiscontinuous);
    if (value_of(x) >= 0.0) ctx.factor(S(-c));
    return std::vector<S>{x};
  });
}

BoundaryOracle origin_oracle() {
  return axis_threshold_oracle([](std::size_t) { return std::optional<double>(0.0); });
}

BoundaryOracle no_boundary_oracle() {
  return axis_threshold_oracle([](std::size_t) { return std::optional<double>(); });
}

}  // namespace

TEST_CASE("axis threshold oracle solves linear crossings") {
  BoundaryOracle o = origin_oracle();
  Model m = one_step(1.0);
  auto hit = o.next_boundary({-1.0}, {2.0}, 1.0, m);
  REQUIRE(hit.has_value());
  CHECK(hit->t_hit == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hit->q_before[0] < 0.0);
  CHECK(hit->q_after[0] >= 0.0);

  // pointing away: no hit
  CHECK(!o.next_boundary({-1.0}, {-2.0}, 1.0, m).has_value());
  // too far: no hit inside the window
  CHECK(!o.next_boundary({-1.0}, {0.5}, 1.0, m).has_value());
}

TEST_CASE("earliest of several axis hits wins") {
  BoundaryOracle o = axis_threshold_oracle([](std::size_t i) {
    return std::optional<double>(i == 0 ? 0.3 : 0.7);
  });
  Model flat = testlib::flat2();
  auto hit = o.next_boundary({0.0, 0.0}, {1.0, 1.0}, 1.0, flat);
  REQUIRE(hit.has_value());
  CHECK(hit->t_hit == doctest::Approx(0.3));
}

TEST_CASE("decompose splits the hit axis from the rest") {
  BoundaryOracle o = origin_oracle();
  Model flat = testlib::flat2();
  auto [par, perp] = o.decompose({0.0, 1.4}, {0.8, -0.6}, flat);
  CHECK(perp[0] == doctest::Approx(0.8));
  CHECK(perp[1] == 0.0);
  CHECK(par[0] == 0.0);
  CHECK(par[1] == doctest::Approx(-0.6));
  for (int k = 0; k < 2; ++k) CHECK(par[k] + perp[k] == doctest::Approx(k == 0 ? 0.8 : -0.6));
}

TEST_CASE("refraction scales the perpendicular momentum by the energy rule") {
  // wall of height 2 at the origin, incoming speed 3: sqrt(9 - 4) = sqrt 5
  Model m = one_step(2.0);
  SamplerConfig cfg;
  cfg.epsilon = 0.5;
  cfg.steps = 1;
  cfg.trim = false;
  ScriptedStream none(0, true);
  State start{{-1.0}, {3.0}};
  IntegrateResult res = nprhmc_integrate(start, m, origin_oracle(), cfg, none);
  REQUIRE(res.ok);
  // after the crossing the (negated) momentum is -sqrt(5)
  CHECK(res.proposal.p[0] == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-9));
  CHECK(res.proposal.q[0] > 0.0);
}

TEST_CASE("exact threshold energy reflects (strict inequality)") {
  Model m = one_step(2.0);
  SamplerConfig cfg;
  cfg.epsilon = 0.5;
  cfg.steps = 1;
  ScriptedStream none(0, true);
  State start{{-0.5}, {2.0}};  // |p_perp|^2 = 4 = 2 dU exactly
  IntegrateResult res = nprhmc_integrate(start, m, origin_oracle(), cfg, none);
  REQUIRE(res.ok);
  CHECK(res.proposal.q[0] < 0.0);  // stayed on the incoming side
}

TEST_CASE("energy is conserved across refraction and reflection") {
  Model m = one_step(1.3);
  SamplerConfig cfg;
  cfg.epsilon = 0.4;
  cfg.steps = 1;
  ScriptedStream none(0, true);
  RandomStream rng(3);
  BoundaryOracle o = origin_oracle();
  for (int rep = 0; rep < 100; ++rep) {
    double p0 = rng.normal() * 2.0;
    State start{{-0.1}, {p0}};
    auto u0 = potential(m, start.q);
    REQUIRE(u0.has_value());
    double h0 = *u0 + 0.5 * p0 * p0;
    IntegrateResult res = nprhmc_integrate(start, m, o, cfg, none);
    REQUIRE(res.ok);
    auto u1 = potential(m, res.proposal.q);
    REQUIRE(u1.has_value());
    double h1 = *u1 + 0.5 * res.proposal.p[0] * res.proposal.p[0];
    CHECK(h1 == doctest::Approx(h0).epsilon(1e-10));
  }
}

TEST_CASE("no-boundary oracle reduces to the plain NP integrator") {
  Model m = testlib::gauss2();
  SamplerConfig cfg;
  cfg.epsilon = 0.15;
  cfg.steps = 8;
  State start{{0.5, -0.2}, {0.7, 1.1}};
  ScriptedStream r1(0, true), r2(0, true);
  IntegrateResult a = np_integrate(start, m, cfg, r1);
  IntegrateResult b = nprhmc_integrate(start, m, no_boundary_oracle(), cfg, r2);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  CHECK(a.proposal.q == b.proposal.q);
  CHECK(a.proposal.p == b.proposal.p);
}

TEST_CASE("contract violations surface as errors") {
  Model m = one_step(1.0);
  SamplerConfig cfg;
  cfg.epsilon = 0.5;
  cfg.steps = 1;
  ScriptedStream none(0, true);
  BoundaryOracle bad;
  bad.next_boundary = [](const Trace&, const Trace&, double limit,
                         const Model&) -> std::optional<BoundaryHit> {
    BoundaryHit h;
    h.t_hit = limit * 2.0;  // outside (0, T]
    h.q_before = {0.0};
    h.q_after = {0.0};
    return h;
  };
  bad.decompose = origin_oracle().decompose;
  State start{{-0.5}, {2.0}};
  CHECK_THROWS_AS(nprhmc_integrate(start, m, bad, cfg, none), OracleContractViolation);
}

TEST_CASE("reflection preserves the momentum norm exactly") {
  Model m = one_step(50.0);  // effectively a hard wall
  SamplerConfig cfg;
  cfg.epsilon = 0.3;
  cfg.steps = 4;
  ScriptedStream none(0, true);
  State start{{-0.2}, {1.7}};
  IntegrateResult res = nprhmc_integrate(start, m, origin_oracle(), cfg, none);
  REQUIRE(res.ok);
  CHECK(std::abs(res.proposal.p[0]) == doctest::Approx(1.7).epsilon(1e-12));
}

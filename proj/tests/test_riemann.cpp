#include <doctest.h>

#include "oracles.hpp"
#include "phasetraffic/analysis.hpp"
#include "phasetraffic/errors.hpp"
#include "phasetraffic/riemann.hpp"
#include "phasetraffic/wft.hpp"

using namespace phasetraffic;
using doctest::Approx;

TEST_CASE("identical states give an empty fan") {
  Model m(oracle::pta(0.0, 1.0));
  for (State u : {State{0, 0}, m.free_state(0.1), State{0.8, 0.0}}) CHECK(solve(m, u, u).empty());
}

TEST_CASE("two free states: one contact at V_f") {
  Model m(oracle::pta(0.0, 1.0));
  WaveFan fan = solve(m, m.free_state(0.2), m.free_state(0.05));
  REQUIRE(fan.waves.size() == 1);
  CHECK(fan.waves[0].kind == WaveKind::Contact);
  CHECK(fan.waves[0].speed() == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("congested pair: 1-wave to u_star then 2-contact at v(u_r)") {
  oracle::Pta0 o;
  Model m(oracle::pta(0.0, 1.0));
  State ul{0.9, 0.9 * 0.2}, ur{0.7, 0.7 * -0.3};
  double vr = o.v(ur.rho, ur.q);
  double rs = o.rho_velocity(0.2, vr);
  WaveFan fan = solve(m, ul, ur);
  REQUIRE(fan.waves.size() == 2);
  CHECK(fan.waves[0].right.rho == Approx(rs).epsilon(1e-11));
  CHECK(fan.waves[0].right.q == Approx(0.2 * rs).epsilon(1e-11));
  CHECK(fan.waves[1].kind == WaveKind::Contact);
  CHECK(fan.waves[1].speed() == Approx(vr).epsilon(1e-12));
  if (!fan.waves[0].is_rarefaction())
    CHECK(fan.waves[0].speed() == Approx((o.f(rs, 0.2 * rs) - o.f(ul.rho, ul.q)) / (rs - ul.rho)).epsilon(1e-11));
}

TEST_CASE("toll-gate initial jumps are stationary") {
  Model m(oracle::pta(0.0, 1.0));
  WaveFan pt = solve(m, {0, 0}, {1.0, -0.4});
  REQUIRE(pt.waves.size() == 1);
  CHECK(pt.waves[0].kind == WaveKind::PhaseTransition);
  CHECK(pt.waves[0].speed() == Approx(0.0).epsilon(1e-14));
  // w above w_-: phase transition to psi2^-(u_r) plus a contact, both at rest,
  // which front tracking merges into a single front
  WaveFan pt2 = solve(m, {0, 0}, {1.0, 0.3});
  for (const auto& w : pt2.waves) CHECK(w.speed() == Approx(0.0).epsilon(1e-14));
  auto fronts = wft::discretize(m, pt2, 1e-3);
  REQUIRE(fronts.size() == 1);
  CHECK(fronts[0].kind == WaveKind::PhaseTransition);
  WaveFan c = solve(m, {1.0, 0.3}, {1.0, -0.4});
  REQUIRE(c.waves.size() == 1);
  CHECK(c.waves[0].kind == WaveKind::Contact);
  CHECK(c.waves[0].speed() == Approx(0.0).epsilon(1e-14));
}

TEST_CASE("free to congested: phase transition to psi2^-(u_r)") {
  oracle::Pta0 o;
  Model m(oracle::pta(0.0, 1.0));
  State ul = m.free_state(0.1), ur{0.8, 0.8 * 0.1};
  double vr = o.v(ur.rho, ur.q);
  double rm = o.rho_velocity(-0.4, vr);
  WaveFan fan = solve(m, ul, ur);
  REQUIRE(fan.waves.size() == 2);
  CHECK(fan.waves[0].kind == WaveKind::PhaseTransition);
  CHECK(fan.waves[0].right.rho == Approx(rm).epsilon(1e-11));
  double lam = (o.f(rm, -0.4 * rm) - o.f(ul.rho, ul.q)) / (rm - ul.rho);
  CHECK(fan.waves[0].speed() == Approx(lam).epsilon(1e-11));
  CHECK(fan.waves[1].speed() == Approx(vr).epsilon(1e-12));
}

TEST_CASE("congested to lower free: 1-wave to psi1(u_l), contact at V_f") {
  Model m(oracle::ptp(1.0));
  oracle::Ptp o;
  State ul = m.curve_point(3.0, 0.3), ur = m.free_state(0.4);
  WaveFan fan = solve(m, ul, ur);
  REQUIRE(fan.waves.size() == 2);
  double r1 = o.rho_velocity(3.0, 1.0);
  CHECK(fan.waves[0].right.rho == Approx(r1).epsilon(1e-11));
  CHECK(fan.waves[1].kind == WaveKind::Contact);
  CHECK(fan.waves[1].speed() == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("solver family guards") {
  Model r(oracle::pta(0.0, 1.0)), s(oracle::pta(0.0, 0.6));
  State a{0.9, 0.0}, b{0.8, 0.0};
  CHECK_THROWS_AS(solve_S(r, a, b), UsageError);
  CHECK_THROWS_AS(solve_R(s, a, b), UsageError);
  CHECK(family_of(r) == SolverFamily::R);
  CHECK(family_of(s) == SolverFamily::S);
}

TEST_CASE("non-intersecting phases: a free state never sits next to a congested one without a phase transition") {
  Model m(oracle::pta(0.3, 0.6));
  analysis::Sampler smp(m, 21);
  for (int k = 0; k < 2000; ++k) {
    auto [ul, ur] = smp.pair(analysis::PairFamily::Any);
    WaveFan fan = solve(m, ul, ur);
    REQUIRE(check_admissible(m, fan).ok());
    for (const auto& w : fan.waves) {
      bool lf = m.in_free(w.left) && !m.is_vacuum(w.left), rf = m.in_free(w.right) && !m.is_vacuum(w.right);
      bool lc = m.in_congested(w.left), rc = m.in_congested(w.right);
      if ((lf && rc) || (lc && rf)) CHECK(w.kind == WaveKind::PhaseTransition);
    }
  }
}

TEST_CASE("random pairs: admissible fans for all four variants") {
  for (auto p : {oracle::pta(0.0, 1.0), oracle::pta(0.3, 0.6), oracle::ptp(1.0), oracle::ptp(0.5)}) {
    Model m(p);
    analysis::Sampler smp(m, 5);
    int bad = 0;
    for (int k = 0; k < 2000; ++k) {
      auto [ul, ur] = smp.pair(analysis::PairFamily::Any);
      WaveFan fan = solve(m, ul, ur);
      if (!check_admissible(m, fan).ok()) ++bad;
      CHECK(eval(m, fan, -1e6) == m.snap(ul));
      CHECK(eval(m, fan, 1e6) == m.snap(ur));
    }
    CHECK(bad == 0);
  }
}

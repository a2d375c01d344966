#include "phasetraffic/constrained.hpp"

#include <algorithm>
#include <cmath>

#include "phasetraffic/errors.hpp"
#include "phasetraffic/numerics.hpp"

namespace phasetraffic {

namespace {

constexpr double kFluxTol = 1e-13;

enum class Pick { R, S };

State hat_on_curve(const Model& m, double w, double target, Level top) {
  double lo = m.rho1(w, top);
  double top_flux = m.lax1_value(w, lo);
  if (target > top_flux * (1.0 + 1e-12) + 1e-14)
    throw InfeasibleError("flux target above the Lax curve maximum");
  if (target >= top_flux) return m.curve_point(w, top == Level::Free ? m.V_f() : m.V_c());
  double hi = m.rho1_0(w);
  double r = numerics::find_root([&](double rho) { return m.lax1_value(w, rho) - target; }, lo, hi);
  return {r, w * r};
}

std::pair<State, State> select(const Model& m, double F, State ul, State ur, Pick pick) {
  ul = m.snap(ul);
  ur = m.snap(ur);
  double w_hat = std::clamp(std::max(m.marker(ul), m.w_minus()), m.w_minus(), m.w_plus());
  double target = F;
  Level top = Level::Free;
  if (pick == Pick::S) {
    top = Level::Congested;
    target = std::min(F, m.lax1_value(w_hat, m.rho1(w_hat, Level::Congested)));
  }
  State hat = hat_on_curve(m, w_hat, target, top);

  State check;
  double vr = m.velocity(ur);
  if (m.flux(m.psi2(ur, Side::Minus)) > F || m.in_free(ur)) {
    check = m.free_state(target / m.V_f());
  } else {
    if (!(vr > 0)) throw InfeasibleError("right state at rest cannot carry the gate flux");
    check = m.state_from_rho_v(target / vr, vr);
  }
  return {hat, check};
}

void split_waves(ConstrainedSplit& s) {
  s.left_fan.left_state = s.fan.left_state;
  s.left_fan.right_state = s.u_hat;
  s.right_fan.left_state = s.u_check;
  s.right_fan.right_state = s.fan.right_state;
  for (const auto& w : s.fan.waves) {
    if (w.speed_hi < 0) s.left_fan.waves.push_back(w);
    else if (w.speed_lo > 0) s.right_fan.waves.push_back(w);
  }
}

ConstrainedSplit assemble(const Model& m, double F, State ul, State ur, Pick pick,
                          WaveFan (*sol)(const Model&, State, State)) {
  check_capacity(m, F);
  ul = m.snap(ul);
  ur = m.snap(ur);
  ConstrainedSplit s;
  s.region = classify_D(m, F, ul, ur, pick == Pick::R ? SolverFamily::R : SolverFamily::S);
  if (s.region == Region::D1) {
    s.fan = sol(m, ul, ur);
    s.u_hat = eval(m, s.fan, 0.0, Trace::Minus);
    s.u_check = eval(m, s.fan, 0.0, Trace::Plus);
    split_waves(s);
    return s;
  }
  auto [hat, check] = select(m, F, ul, ur, pick);
  s.u_hat = hat;
  s.u_check = check;
  WaveFan left = sol(m, ul, hat);
  WaveFan right = sol(m, check, ur);
  for (const auto& w : left.waves)
    if (w.speed_hi > 1e-10) throw Error("constrained split: left wave with positive speed");
  for (const auto& w : right.waves)
    if (w.speed_lo < -1e-10) throw Error("constrained split: right wave with negative speed");
  s.fan.left_state = ul;
  s.fan.right_state = ur;
  s.fan.waves = left.waves;
  if (state_distance(hat, check) > kStateTol) {
    Wave j;
    j.kind = WaveKind::StationaryJump;
    j.left = hat;
    j.right = check;
    s.fan.waves.push_back(j);
  }
  s.fan.waves.insert(s.fan.waves.end(), right.waves.begin(), right.waves.end());
  s.left_fan = left;
  s.right_fan = right;
  return s;
}

}  // namespace

void check_capacity(const Model& m, double F) {
  if (!(F > 0 && F < m.V_f() * m.sigma_f_plus()))
    throw DomainError("capacity F must lie in (0, V_f sigma_f_plus)");
}

Region classify_D(const Model& m, double F, State ul, State ur, SolverFamily) {
  // the two families share the same case structure once V = V_f
  ul = m.snap(ul);
  ur = m.snap(ur);
  bool fl = m.in_free(ul), fr = m.in_free(ur);
  bool cl = m.in_congested(ul), cr = m.in_congested(ur);
  double g;
  if (fl && fr) g = m.flux(ul);
  else if (cl && cr) g = m.flux(m.u_star(ul, ur));
  else if (cl && fr) g = m.flux(m.psi1(ul, Level::Free));
  else if (m.in_free_minus(ul) || m.is_vacuum(ul)) g = std::min(m.flux(ul), m.flux(m.psi2(ur, Side::Minus)));
  else g = m.flux(m.u_star(ul, ur));
  // non-strict, with room for rounding when g was built to equal F
  return g <= F + kFluxTol ? Region::D1 : Region::D2;
}

std::pair<State, State> select_hat_check_R(const Model& m, double F, State ul, State ur) {
  return select(m, F, ul, ur, Pick::R);
}

std::pair<State, State> select_hat_check_S(const Model& m, double F, State ul, State ur) {
  return select(m, F, ul, ur, Pick::S);
}

ConstrainedSplit solve_RF(const Model& m, double F, State ul, State ur) {
  if (!m.intersecting()) throw UsageError("solve_RF needs V_f == V_c");
  return assemble(m, F, ul, ur, Pick::R, &solve_R);
}

ConstrainedSplit solve_RF_relaxed(const Model& m, double F, State ul, State ur) {
  return assemble(m, F, ul, ur, Pick::R, &solve_R_relaxed);
}

ConstrainedSplit solve_SF(const Model& m, double F, State ul, State ur) {
  if (m.intersecting()) throw UsageError("solve_SF needs V_c < V_f");
  return assemble(m, F, ul, ur, Pick::S, &solve_S);
}

ConstrainedSplit solve_constrained(const Model& m, double F, State ul, State ur) {
  return m.intersecting() ? solve_RF(m, F, ul, ur) : solve_SF(m, F, ul, ur);
}

}  // namespace phasetraffic

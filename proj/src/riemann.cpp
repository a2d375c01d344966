#include "phasetraffic/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "phasetraffic/errors.hpp"
#include "phasetraffic/numerics.hpp"

namespace phasetraffic {

namespace {

bool free_only(const Model& m, const State& u) { return m.in_free(u) && !m.in_congested(u); }
bool congested_only(const Model& m, const State& u) { return m.in_congested(u) && !m.in_free(u); }

class FanBuilder {
 public:
  FanBuilder(const Model& m, State ul, State ur) : m_(m), cur_(ul) {
    fan_.left_state = ul;
    fan_.right_state = ur;
  }

  const State& current() const { return cur_; }

  void jump(WaveKind kind, State to, double speed) {
    if (state_distance(cur_, to) <= kStateTol) return;
    Wave w;
    w.kind = kind;
    w.left = cur_;
    w.right = to;
    w.speed_lo = w.speed_hi = speed;
    push(w);
  }

  void jump_rh(WaveKind kind, State to) {
    if (state_distance(cur_, to) <= kStateTol) return;
    jump(kind, to, m_.rh_speed(cur_, to));
  }

  // 1-wave along the Lax curve through the current state
  void one_wave(State to) {
    if (state_distance(cur_, to) <= kStateTol) return;
    const State a = cur_;
    double w = std::clamp(m_.marker(a), m_.w_minus(), m_.w_plus());
    double d2a = m_.lax1_d2(w, a.rho), d2b = m_.lax1_d2(w, to.rho);
    bool crossing = (free_only(m_, a) && congested_only(m_, to)) ||
                    (congested_only(m_, a) && free_only(m_, to));
    WaveKind disc = crossing ? WaveKind::PhaseTransition : WaveKind::Shock1;
    if (std::abs(d2a) <= 1e-14 && std::abs(d2b) <= 1e-14) {
      jump_rh(crossing ? WaveKind::PhaseTransition : WaveKind::Contact, to);
      return;
    }
    bool convex = d2a > 0;
    bool shock = convex ? to.rho < a.rho : to.rho > a.rho;
    if (shock) {
      jump_rh(disc, to);
      return;
    }
    Wave r;
    r.kind = WaveKind::Rarefaction1;
    r.left = a;
    r.right = to;
    r.marker = w;
    r.speed_lo = m_.lax1_d1(w, a.rho);
    r.speed_hi = m_.lax1_d1(w, to.rho);
    push(r);
  }

  void second_contact(State to) {
    if (state_distance(cur_, to) <= kStateTol) return;
    jump(WaveKind::Contact, to, m_.velocity(to));
  }

  void append(const WaveFan& f) {
    for (const auto& w : f.waves) push(w);
    cur_ = f.right_state;
  }

  WaveFan finish() {
    if (!fan_.waves.empty()) fan_.waves.back().right = fan_.right_state;
    return fan_;
  }

 private:
  void push(Wave w) {
    w.left = cur_;
    fan_.waves.push_back(w);
    cur_ = w.right;
  }

  const Model& m_;
  WaveFan fan_;
  State cur_;
};

void lax_into(const Model& m, FanBuilder& b, const State& ur) {
  State us = m.u_star(b.current(), ur);
  b.one_wave(us);
  b.second_contact(ur);
}

// u_l in Omega_f^-, u_r congested: (R.4) or (R.5)
void free_minus_to_congested(const Model& m, FanBuilder& b, const State& ul, const State& ur) {
  State u2 = m.psi2(ur, Side::Minus);
  double lam = m.rh_speed(ul, u2);
  if (lam >= m.lax1_d1(m.w_minus(), u2.rho)) {
    b.jump(WaveKind::PhaseTransition, u2, lam);
  } else {
    double wm = m.w_minus();
    auto g = [&](double r) {
      return m.rh_speed(ul, State{r, wm * r}) - m.lax1_d1(wm, r);
    };
    double r = numerics::find_root(g, m.sigma_f_minus(), u2.rho);
    State up{r, wm * r};
    b.jump(WaveKind::PhaseTransition, up, m.rh_speed(ul, up));
    b.one_wave(u2);
  }
  b.second_contact(ur);
}

}  // namespace

SolverFamily family_of(const Model& m) { return m.intersecting() ? SolverFamily::R : SolverFamily::S; }

WaveFan lax_congested(const Model& m, State ul, State ur) {
  ul = m.snap(ul);
  ur = m.snap(ur);
  if (!m.in_congested(ul) && !m.in_free_plus(ul)) throw DomainError("lax_congested: left state not congested");
  if (!m.in_congested(ur) && !m.in_free_plus(ur)) throw DomainError("lax_congested: right state not congested");
  FanBuilder b(m, ul, ur);
  lax_into(m, b, ur);
  return b.finish();
}

WaveFan solve_R_relaxed(const Model& m, State ul, State ur) {
  ul = m.snap(ul);
  ur = m.snap(ur);
  FanBuilder b(m, ul, ur);
  if (state_distance(ul, ur) <= kStateTol) return b.finish();
  bool fl = m.in_free(ul), fr = m.in_free(ur);
  bool cl = m.in_congested(ul), cr = m.in_congested(ur);
  if (fl && fr) {
    b.jump(WaveKind::Contact, ur, m.V_f());
  } else if (cl && cr) {
    lax_into(m, b, ur);
  } else if (cl && fr) {
    b.one_wave(m.psi1(ul, Level::Free));
    b.jump(WaveKind::Contact, ur, m.V_f());
  } else if (m.in_free_minus(ul) || m.is_vacuum(ul)) {
    free_minus_to_congested(m, b, ul, ur);
  } else {
    // free-only state in Omega_f^+ against a congested one
    lax_into(m, b, ur);
  }
  return b.finish();
}

WaveFan solve_R(const Model& m, State ul, State ur) {
  if (!m.intersecting()) throw UsageError("solve_R needs V_f == V_c");
  return solve_R_relaxed(m, ul, ur);
}

WaveFan solve_S(const Model& m, State ul, State ur) {
  if (m.intersecting()) throw UsageError("solve_S needs V_c < V_f");
  ul = m.snap(ul);
  ur = m.snap(ur);
  if (state_distance(ul, ur) <= kStateTol) return FanBuilder(m, ul, ur).finish();
  bool fr = m.in_free(ur);
  bool cl = m.in_congested(ul), cr = m.in_congested(ur);

  if (cl && fr && m.lax1_d2(m.marker(ul), ul.rho) < 0) {
    // (S.2)
    FanBuilder b(m, ul, ur);
    State c = m.psi1(ul, Level::Congested);
    State f = m.psi1(ul, Level::Free);
    b.one_wave(c);
    b.jump_rh(WaveKind::PhaseTransition, f);
    b.jump(WaveKind::Contact, ur, m.V_f());
    return b.finish();
  }
  if (cr && (m.in_free_minus(ul) || m.is_vacuum(ul))) {
    State uc = m.u_c_minus();
    if (m.rh_speed(ul, uc) < m.lax1_d1(m.w_minus(), uc.rho)) {
      // (S.3)
      FanBuilder b(m, ul, ur);
      b.jump_rh(WaveKind::PhaseTransition, uc);
      lax_into(m, b, ur);
      return b.finish();
    }
  }
  if (cr && m.in_free_plus(ul) && m.lax1_d2(m.marker(ul), ul.rho) > 0) {
    // (S.4)
    FanBuilder b(m, ul, ur);
    b.jump_rh(WaveKind::PhaseTransition, m.psi1(ul, Level::Congested));
    lax_into(m, b, ur);
    return b.finish();
  }
  return solve_R_relaxed(m, ul, ur);
}

WaveFan solve(const Model& m, State ul, State ur) {
  return m.intersecting() ? solve_R(m, ul, ur) : solve_S(m, ul, ur);
}

}  // namespace phasetraffic

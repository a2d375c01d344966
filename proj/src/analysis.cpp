#include "phasetraffic/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "phasetraffic/errors.hpp"
#include "phasetraffic/numerics.hpp"

namespace phasetraffic {

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::R: return "R";
    case SolverKind::S: return "S";
    case SolverKind::RF: return "RF";
    case SolverKind::SF: return "SF";
  }
  return "?";
}

SolverKind solver_kind_from_string(const std::string& s) {
  for (auto k : {SolverKind::R, SolverKind::S, SolverKind::RF, SolverKind::SF})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown solver '" + s + "'");
}

bool is_constrained(SolverKind k) { return k == SolverKind::RF || k == SolverKind::SF; }

WaveFan run_solver(const Model& m, SolverKind kind, double F, State ul, State ur) {
  switch (kind) {
    case SolverKind::R: return solve_R(m, ul, ur);
    case SolverKind::S: return solve_S(m, ul, ur);
    case SolverKind::RF: return solve_RF(m, F, ul, ur).fan;
    case SolverKind::SF: return solve_SF(m, F, ul, ur).fan;
  }
  throw UsageError("bad solver kind");
}

}  // namespace phasetraffic

namespace phasetraffic::analysis {

namespace {

constexpr double kTol = 1e-9;

bool near_state(const State& a, const State& b) { return state_distance(a, b) <= kTol; }

// point of the w-curve inside Omega_c carrying flux F, if any
std::optional<State> congested_point_with_flux(const Model& m, double w, double F) {
  double lo = m.rho1(w, Level::Congested);
  double hi = m.rho1_0(w);
  if (m.lax1_value(w, lo) < F) return std::nullopt;
  double r = numerics::find_root([&](double rho) { return m.lax1_value(w, rho) - F; }, lo, hi);
  return State{r, w * r};
}

double speed_bound(const Model& m) {
  double b = m.V_f();
  for (double w : {m.w_minus(), 0.5 * (m.w_minus() + m.w_plus()), m.w_plus()}) {
    b = std::max(b, std::abs(m.lax1_d1(w, m.rho1_0(w))));
    b = std::max(b, std::abs(m.lax1_d1(w, m.rho1(w, Level::Free))));
  }
  return 1.5 * b;
}

double resolve_window(const Model& m, double window) { return window > 0 ? window : speed_bound(m); }

}  // namespace

// ---------- membership ----------

bool member(const Model& m, const DomainSpec& spec, const State& u) {
  switch (spec.kind) {
    case DomainSpec::Kind::OmegaF: return m.in_free(u);
    case DomainSpec::Kind::OmegaC: return m.in_congested(u);
    case DomainSpec::Kind::Custom: return spec.predicate(u);
    case DomainSpec::Kind::If: {
      if (m.in_free(u)) return true;
      if (!m.in_congested(u)) return false;
      double f = m.flux(u);
      double F = spec.F;
      bool i1 = f <= F + kTol && F <= m.flux(m.psi2(u, Side::Plus)) + kTol;
      bool i2 = f > F - kTol && m.lax1_d2(u.q / u.rho, u.rho) > 0;
      return i1 || i2;
    }
    case DomainSpec::Kind::Ic_R:
    case DomainSpec::Kind::Ic_S: {
      if (m.in_congested(u)) return true;
      double F = spec.F;
      if (spec.kind == DomainSpec::Kind::Ic_S && !(F < m.flux(m.u_c_minus()))) return false;
      double rho = F / m.V_f();
      if (rho > m.sigma_f_plus()) return false;
      return near_state(u, m.free_state(rho));
    }
  }
  return false;
}

// ---------- sampling ----------

std::string to_string(PairFamily f) {
  switch (f) {
    case PairFamily::FreeFree: return "free_free";
    case PairFamily::CongCong: return "cong_cong";
    case PairFamily::CongFree: return "cong_free";
    case PairFamily::FreeCong: return "free_cong";
    case PairFamily::Any: return "any";
  }
  return "?";
}

Sampler::Sampler(const Model& m, std::uint64_t seed) : m_(m), rng_(seed) {}

double Sampler::uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng_);
}

State Sampler::free_any() {
  if (uniform(0, 1) < 0.03) return {0.0, 0.0};
  return m_.free_state(uniform(0.0, m_.sigma_f_plus()));
}

State Sampler::free_minus() {
  if (uniform(0, 1) < 0.03) return {0.0, 0.0};
  return m_.free_state(uniform(0.0, m_.sigma_f_minus() * (1.0 - 1e-6)));
}

State Sampler::free_plus() { return m_.free_state(uniform(m_.sigma_f_minus(), m_.sigma_f_plus())); }

State Sampler::congested() {
  double wm = m_.w_minus(), wp = m_.w_plus();
  double pick = uniform(0, 1);
  if (pick < 0.1) {
    // boundary states of the congested box
    double w = uniform(wm, wp);
    double v = uniform(0, m_.V_c());
    switch (static_cast<int>(uniform(0, 4))) {
      case 0: return m_.curve_point(w, 0.0);
      case 1: return m_.curve_point(w, m_.V_c());
      case 2: return m_.curve_point(wm, v);
      default: return m_.curve_point(wp, v);
    }
  }
  for (;;) {
    double rho = uniform(m_.sigma_c_minus(), m_.R());
    double w = uniform(wm, wp);
    double v = m_.curve_velocity(w, rho);
    if (v >= 0 && v <= m_.V_c()) return {rho, w * rho};
  }
}

State Sampler::congested_only() {
  for (;;) {
    State u = congested();
    if (!m_.in_free(u)) return u;
  }
}

State Sampler::any() { return uniform(0, 1) < 0.4 ? free_any() : congested(); }

std::pair<State, State> Sampler::pair(PairFamily fam) {
  switch (fam) {
    case PairFamily::FreeFree: return {free_any(), free_any()};
    case PairFamily::CongCong: return {congested(), congested()};
    case PairFamily::CongFree: return {congested_only(), free_any()};
    case PairFamily::FreeCong: return {free_any(), congested_only()};
    case PairFamily::Any: break;
  }
  State a = any();
  return {a, any()};
}

State Sampler::in_domain(const DomainSpec& spec) {
  for (int tries = 0; tries < 100000; ++tries) {
    if ((spec.kind == DomainSpec::Kind::Ic_R || spec.kind == DomainSpec::Kind::Ic_S) &&
        uniform(0, 1) < 0.05) {
      double rho = spec.F / m_.V_f();
      State p = m_.free_state(std::min(rho, m_.sigma_f_plus()));
      if (member(m_, spec, p)) return p;
    }
    State u = any();
    if (member(m_, spec, u)) return u;
  }
  throw InfeasibleError("could not sample from the domain");
}

std::vector<State> attained_states(const Model& m, const WaveFan& fan, int interior) {
  std::vector<State> out{fan.left_state, fan.right_state};
  for (const auto& w : fan.waves) {
    out.push_back(w.left);
    out.push_back(w.right);
    if (w.is_rarefaction()) {
      for (int k = 1; k <= interior; ++k) {
        double xi = w.speed_lo + (w.speed_hi - w.speed_lo) * k / (interior + 1);
        out.push_back(eval(m, fan, xi));
      }
    }
  }
  return out;
}

ClosureReport closure_test(const Model& m, double F, const DomainSpec& spec, SolverKind solver,
                           std::size_t n_pairs, std::uint64_t seed) {
  Sampler s(m, seed);
  ClosureReport rep;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    State ul = s.in_domain(spec), ur = s.in_domain(spec);
    WaveFan fan = run_solver(m, solver, F, ul, ur);
    ++rep.n_pairs;
    bool bad = false;
    for (const auto& u : attained_states(m, fan)) {
      if (!member(m, spec, u)) {
        rep.violators.push_back(u);
        bad = true;
      }
    }
    if (bad) rep.violating_pairs.emplace_back(ul, ur);
  }
  return rep;
}

std::vector<GeneratorFamily> minimality_generators(const Model& m, double F, MinimalFamily fam,
                                                   std::size_t n, std::uint64_t seed) {
  Sampler s(m, seed);
  std::vector<GeneratorFamily> out;
  auto flux_point = [&]() -> State {
    for (;;) {
      double w = s.uniform(m.w_minus(), m.w_plus());
      if (auto p = congested_point_with_flux(m, w, F)) return *p;
    }
  };
  if (fam == MinimalFamily::Ic) {
    GeneratorFamily g{"congested pairs with f(psi2-(u_r)) > F", {}};
    for (int tries = 0; g.pairs.size() < n && tries < 1000 * static_cast<int>(n); ++tries) {
      State ul = s.congested(), ur = s.congested();
      if (m.flux(m.psi2(ur, Side::Minus)) > F) g.pairs.emplace_back(ul, ur);
    }
    out.push_back(g);
    return out;
  }
  GeneratorFamily a{"free pairs with f(u_l) > F", {}};
  double rho_lo = F / m.V_f();
  for (std::size_t i = 0; i < n && rho_lo < m.sigma_f_plus(); ++i)
    a.pairs.emplace_back(m.free_state(s.uniform(rho_lo, m.sigma_f_plus())), s.free_any());
  out.push_back(a);

  GeneratorFamily b{"congested pairs with f = F and v(u_l) > v(u_r)", {}};
  for (std::size_t i = 0; i < n; ++i) {
    State p = flux_point(), q = flux_point();
    if (m.velocity(p) < m.velocity(q)) std::swap(p, q);
    if (m.velocity(p) > m.velocity(q)) b.pairs.emplace_back(p, q);
  }
  out.push_back(b);

  GeneratorFamily c{"free_plus x congested with f(u_l) <= F = f(u_r)", {}};
  if (F > m.V_f() * m.sigma_f_minus()) {
    double hi = std::min(F / m.V_f(), m.sigma_f_plus());
    for (std::size_t i = 0; i < n; ++i)
      c.pairs.emplace_back(m.free_state(s.uniform(m.sigma_f_minus(), hi)), flux_point());
  }
  out.push_back(c);
  return out;
}

// ---------- total variation ----------

bool zero_zone(const Model& m, double F, SolverKind solver, State ul, State ur) {
  if (!is_constrained(solver)) return true;
  ul = m.snap(ul);
  ur = m.snap(ur);
  auto fam = solver == SolverKind::RF ? SolverFamily::R : SolverFamily::S;
  if (classify_D(m, F, ul, ur, fam) == Region::D1) return true;
  auto [hat, check] = solver == SolverKind::RF ? select_hat_check_R(m, F, ul, ur)
                                               : select_hat_check_S(m, F, ul, ur);
  double vl = m.velocity(ul), wr = m.marker(ur);
  double vhat = m.velocity(hat), wcheck = m.marker(check);
  bool cl = m.in_congested(ul), cr = m.in_congested(ur);
  if (cl && cr && m.flux(m.psi2(ur, Side::Minus)) <= F && vl <= vhat && wr <= wcheck) return true;
  bool cl_minus = cl && !m.in_free_plus(ul);
  bool fr_minus = m.in_free_minus(ur) || m.is_vacuum(ur);
  return cl_minus && fr_minus && vl <= vhat && wr <= wcheck;
}

TvReport delta_tv(const Model& m, double F, SolverKind solver, State ul, State ur) {
  WaveFan fan = run_solver(m, solver, F, ul, ur);
  const State& a = fan.left_state;
  const State& b = fan.right_state;
  TvReport r;
  r.dtv_v = tv_of(m, fan, Coord::V) - std::abs(m.velocity(a) - m.velocity(b));
  r.dtv_w = tv_of(m, fan, Coord::W) - std::abs(m.marker(a) - m.marker(b));
  r.zero_zone = zero_zone(m, F, solver, ul, ur);
  return r;
}

int special_case(const Model& mS, double F, State ul, State ur) {
  ul = mS.snap(ul);
  ur = mS.snap(ur);
  if (!mS.in_free(ur)) return 0;
  double fl = mS.flux(ul);
  if (mS.in_free_minus(ul) && !mS.is_vacuum(ul)) {
    if (F > mS.flux(mS.u_c_minus()) && F < fl) return 1;
  } else if (mS.in_free_plus(ul)) {
    if (F > mS.flux(mS.psi1(ul, Level::Congested)) && F < fl) return 2;
  } else if (mS.in_congested(ul)) {
    if (F > mS.flux(mS.psi1(ul, Level::Congested)) && F < mS.flux(mS.psi1(ul, Level::Free))) return 3;
  }
  return 0;
}

TvComparison compare_tv_RF_SF(const Model& mR, const Model& mS, double F, State ul, State ur) {
  TvComparison c;
  c.r = delta_tv(mR, F, SolverKind::RF, ul, ur);
  c.s = delta_tv(mS, F, SolverKind::SF, ul, ur);
  c.special = special_case(mS, F, ul, ur);
  c.expect_strict_v = c.special == 1 || c.special == 2;
  if (c.special != 0) {
    auto check = select_hat_check_S(mS, F, ul, ur).second;
    c.expect_strict_w = mS.marker(mS.snap(ur)) > mS.marker(check);
  }
  constexpr double eps = 1e-12;
  c.strict_v = c.r.dtv_v < c.s.dtv_v - eps;
  c.strict_w = c.r.dtv_w < c.s.dtv_w - eps;
  c.ok = c.r.dtv_v <= c.s.dtv_v + eps && c.r.dtv_w <= c.s.dtv_w + eps &&
         c.strict_v == c.expect_strict_v && c.strict_w == c.expect_strict_w;
  return c;
}

// ---------- L1 ----------

Profile profile_of(const Model& m, const WaveFan& fan) {
  Profile p;
  p.at = [&m, fan](double xi) { return eval(m, fan, xi); };
  for (const auto& w : fan.waves) {
    p.breaks.push_back(w.speed_lo);
    if (w.speed_hi != w.speed_lo) p.breaks.push_back(w.speed_hi);
  }
  return p;
}

double profile_metric(const Model& m, const State& a, const State& b) {
  auto fw = [&](const State& u) { return u.rho * m.marker(u); };
  return std::abs(a.rho - b.rho) + std::abs(m.flux(a) - m.flux(b)) + std::abs(fw(a) - fw(b));
}

double l1_distance(const Model& m, const Profile& a, const Profile& b, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  for (double x : a.breaks)
    if (x > lo && x < hi) pts.push_back(x);
  for (double x : b.breaks)
    if (x > lo && x < hi) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  // 5-point Gauss-Legendre on each smooth piece
  static const std::array<double, 5> node{0.0, -0.5384693101056831, 0.5384693101056831,
                                          -0.9061798459386640, 0.9061798459386640};
  static const std::array<double, 5> weight{0.5688888888888889, 0.4786286704993665,
                                            0.4786286704993665, 0.2369268850561891,
                                            0.2369268850561891};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double x0 = pts[i], x1 = pts[i + 1];
    if (x1 - x0 <= 0) continue;
    double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
    for (int k = 0; k < 5; ++k) {
      double x = mid + half * node[k];
      total += half * weight[k] * profile_metric(m, a.at(x), b.at(x));
    }
  }
  return total;
}

double l1_distance(const Model& m, const WaveFan& a, const WaveFan& b, double lo, double hi) {
  return l1_distance(m, profile_of(m, a), profile_of(m, b), lo, hi);
}

// ---------- consistency ----------

namespace {

constexpr double kConsistencyTol = 1e-8;

Profile spliced(const Profile& left, const Profile& right, double xi) {
  Profile p;
  p.at = [left, right, xi](double x) { return x < xi ? left.at(x) : right.at(x); };
  for (double b : left.breaks)
    if (b < xi) p.breaks.push_back(b);
  p.breaks.push_back(xi);
  for (double b : right.breaks)
    if (b > xi) p.breaks.push_back(b);
  return p;
}

Profile constant(State u) { return {[u](double) { return u; }, {}}; }

double max_speed(const WaveFan& f) {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& w : f.waves) s = std::max(s, w.speed_hi);
  return s;
}

double min_speed(const WaveFan& f) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& w : f.waves) s = std::min(s, w.speed_lo);
  return s;
}

}  // namespace

ConsistencyCase check_I(const Model& m, SolverKind kind, double F, State ul, State ur, double xi,
                        double window) {
  window = resolve_window(m, window);
  ConsistencyCase c;
  c.u_l = ul;
  c.u_r = ur;
  c.xi = xi;
  WaveFan T = run_solver(m, kind, F, ul, ur);
  Profile pT = profile_of(m, T);
  c.u_m = eval(m, T, xi, Trace::Plus);
  WaveFan A = run_solver(m, kind, F, ul, c.u_m);
  WaveFan B = run_solver(m, kind, F, c.u_m, ur);
  double ga = l1_distance(m, profile_of(m, A), spliced(pT, constant(c.u_m), xi), -window, window);
  double gb = l1_distance(m, profile_of(m, B), spliced(constant(c.u_m), pT, xi), -window, window);
  c.gap = ga + gb;
  c.holds = c.gap <= kConsistencyTol;
  return c;
}

ConsistencyCase check_II(const Model& m, SolverKind kind, double F, State ul, State um, State ur,
                         double xi, double window) {
  window = resolve_window(m, window);
  ConsistencyCase c{ul, um, ur, xi, 0.0, true};
  WaveFan A = run_solver(m, kind, F, ul, um);
  WaveFan B = run_solver(m, kind, F, um, ur);
  WaveFan T = run_solver(m, kind, F, ul, ur);
  c.gap = l1_distance(m, profile_of(m, T), spliced(profile_of(m, A), profile_of(m, B), xi), -window, window);
  c.holds = c.gap <= kConsistencyTol;
  return c;
}

std::size_t ConsistencyReport::failures_I() const {
  return std::count_if(cases_I.begin(), cases_I.end(), [](const auto& c) { return !c.holds; });
}

std::size_t ConsistencyReport::failures_II() const {
  return std::count_if(cases_II.begin(), cases_II.end(), [](const auto& c) { return !c.holds; });
}

ConsistencyReport consistency_suite(const Model& m, SolverKind kind, double F, std::size_t n,
                                    std::uint64_t seed, bool do_I, bool do_II, double window) {
  window = resolve_window(m, window);
  Sampler s(m, seed);
  ConsistencyReport rep;
  if (do_I) {
    while (rep.cases_I.size() < n) {
      auto [ul, ur] = s.pair(PairFamily::Any);
      WaveFan T = run_solver(m, kind, F, ul, ur);
      double lo = T.empty() ? -1.0 : min_speed(T) - 0.5;
      double hi = T.empty() ? 1.0 : max_speed(T) + 0.5;
      double xi = s.uniform(lo, hi);
      bool on_speed = false;
      for (const auto& w : T.waves)
        if (std::abs(xi - w.speed_lo) < 1e-6 || std::abs(xi - w.speed_hi) < 1e-6) on_speed = true;
      if (on_speed) continue;
      rep.cases_I.push_back(check_I(m, kind, F, ul, ur, xi, window));
    }
  }
  if (do_II) {
    std::size_t attempts = 0;
    while (rep.cases_II.size() < n && attempts < 500 * n) {
      ++attempts;
      State ul = s.any();
      State um;
      if (s.uniform(0, 1) < 0.5) {
        um = s.any();
      } else {
        // a state produced by the solver itself, e.g. a gate trace
        WaveFan aux = run_solver(m, kind, F, ul, s.any());
        auto pts = attained_states(m, aux, 3);
        um = pts[static_cast<std::size_t>(s.uniform(0, static_cast<double>(pts.size()))) % pts.size()];
      }
      State ur = s.any();
      WaveFan A = run_solver(m, kind, F, ul, um);
      WaveFan B = run_solver(m, kind, F, um, ur);
      double a = A.empty() ? -window : max_speed(A);
      double b = B.empty() ? window : min_speed(B);
      a = std::max(a, -window);
      b = std::min(b, window);
      if (!(b - a > 1e-6)) continue;
      double xi = s.uniform(a + 0.25 * (b - a), b - 0.25 * (b - a));
      rep.cases_II.push_back(check_II(m, kind, F, ul, um, ur, xi, window));
    }
  }
  return rep;
}

std::vector<ConsistencyCase> restriction_counterexamples(const Model& m, double F, std::size_t n,
                                                         std::uint64_t seed) {
  Sampler s(m, seed);
  SolverKind kind = m.intersecting() ? SolverKind::RF : SolverKind::SF;
  std::vector<ConsistencyCase> out;
  std::size_t attempts = 0;
  while (out.size() < n && attempts < 2000 * n) {
    ++attempts;
    State ur = s.congested_only();
    State u2 = m.psi2(ur, Side::Minus);
    if (!(m.flux(u2) > F)) continue;
    double rho_hi = std::min(F / m.V_f(), m.sigma_f_minus()) * (1.0 - 1e-6);
    State ul = m.free_state(s.uniform(0.0, rho_hi));
    if (!(m.flux(ul) < F)) continue;
    WaveFan T = run_solver(m, kind, F, ul, ur);
    // interval of positive speeds on which T equals psi2^-(u_r)
    for (std::size_t k = 0; k + 1 < T.waves.size(); ++k) {
      if (state_distance(T.waves[k].right, u2) > 1e-10) continue;
      double a = std::max(0.0, T.waves[k].speed_hi);
      double b = T.waves[k + 1].speed_lo;
      if (b - a > 1e-6) {
        out.push_back(check_I(m, kind, F, ul, ur, 0.5 * (a + b), -1.0));
        break;
      }
    }
  }
  return out;
}

// ---------- continuity ----------

double ContinuityReport::max_ratio() const {
  double r = 0.0;
  for (const auto& p : records)
    if (p.dist > 0) r = std::max(r, p.gap / p.dist);
  return r;
}

namespace {

State perturb(const Model& m, Sampler& s, const State& u, double eps) {
  double sign = s.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
  if (m.is_vacuum(u)) return m.free_state(eps * s.uniform(0.5, 1.0));
  if (m.in_free(u)) {
    double r = std::clamp(u.rho + sign * eps * s.uniform(0.5, 1.0), 0.0, m.sigma_f_plus());
    return m.free_state(r);
  }
  double v = std::clamp(m.velocity(u) + eps * s.uniform(-1, 1), 0.0, m.V_c());
  double w = std::clamp(m.marker(u) + eps * s.uniform(-1, 1), m.w_minus(), m.w_plus());
  return m.curve_point(w, v);
}

}  // namespace

ContinuityReport l1loc_probe(const Model& m, SolverKind kind, double F, std::size_t n,
                             const std::vector<double>& radii, std::uint64_t seed, double window) {
  window = resolve_window(m, window);
  Sampler s(m, seed);
  ContinuityReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    auto [ul, ur] = s.pair(PairFamily::Any);
    WaveFan base = run_solver(m, kind, F, ul, ur);
    for (double eps : radii) {
      State a = perturb(m, s, ul, eps), b = perturb(m, s, ur, eps);
      WaveFan pert = run_solver(m, kind, F, a, b);
      ProbeRecord r;
      r.u_l = ul;
      r.u_r = ur;
      r.eps = eps;
      r.dist = profile_metric(m, a, ul) + profile_metric(m, b, ur);
      r.gap = l1_distance(m, base, pert, -window, window);
      rep.records.push_back(r);
    }
  }
  return rep;
}

ContinuityReport sf_discontinuity_probe(const Model& mS, double F, std::size_t n,
                                        const std::vector<double>& radii, std::uint64_t seed,
                                        double window) {
  window = resolve_window(mS, window);
  if (!(F > mS.flux(mS.u_c_minus())))
    throw UsageError("the discontinuity family needs F > f(u_-^c)");
  Sampler s(mS, seed);
  ContinuityReport rep;
  State ul = mS.free_state(F / mS.V_f());
  State hash = mS.in_free_minus(ul) ? mS.u_c_minus() : mS.psi1(ul, Level::Congested);
  double bound = 0.5 * std::abs(mS.rh_speed(ul, hash)) * profile_metric(mS, hash, ul);
  for (std::size_t i = 0; i < n; ++i) {
    State ur = s.free_any();
    WaveFan base = run_solver(mS, SolverKind::SF, F, ul, ur);
    for (double eps : radii) {
      double r = std::min(ul.rho + eps, mS.sigma_f_plus());
      State pl = mS.free_state(r);
      WaveFan pert = run_solver(mS, SolverKind::SF, F, pl, ur);
      ProbeRecord rec;
      rec.u_l = ul;
      rec.u_r = ur;
      rec.eps = eps;
      rec.dist = profile_metric(mS, pl, ul);
      rec.gap = l1_distance(mS, base, pert, -window, 0.0);
      rec.bound = bound;
      rep.records.push_back(rec);
    }
  }
  return rep;
}

}  // namespace phasetraffic::analysis

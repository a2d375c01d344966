#include "phasetraffic/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasetraffic/errors.hpp"
#include "phasetraffic/numerics.hpp"

namespace phasetraffic {

double state_distance(const State& a, const State& b) {
  return std::abs(a.rho - b.rho) + std::abs(a.q - b.q);
}

std::string to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::Vacuum: return "vacuum";
    case PhaseClass::FreeMinus: return "free_minus";
    case PhaseClass::FreePlus: return "free_plus";
    case PhaseClass::CongestedAndFree: return "congested_and_free";
    case PhaseClass::CongestedOnly: return "congested_only";
    case PhaseClass::OutOfDomain: return "out_of_domain";
  }
  return "?";
}

// ---- pressure ----

PressureLaw PressureLaw::power(double gamma) {
  PressureLaw law;
  law.name_ = "power";
  law.gamma_ = gamma;
  law.p_ = [gamma](double r) { return std::pow(r, gamma); };
  law.dp_ = [gamma](double r) { return gamma * std::pow(r, gamma - 1.0); };
  law.d2p_ = [gamma](double r) {
    return gamma == 1.0 ? 0.0 : gamma * (gamma - 1.0) * std::pow(r, gamma - 2.0);
  };
  return law;
}

PressureLaw PressureLaw::custom(std::string name, Fn p, Fn dp, Fn d2p) {
  PressureLaw law;
  law.name_ = std::move(name);
  law.p_ = std::move(p);
  law.dp_ = std::move(dp);
  law.d2p_ = std::move(d2p);
  return law;
}

double PressureLaw::inverse(double w, double rho_max) const {
  if (w <= p_(0.0)) return 0.0;
  if (w >= p_(rho_max)) return rho_max;
  if (gamma_) return std::min(rho_max, std::pow(w, 1.0 / *gamma_));
  return numerics::find_root([&](double r) { return p_(r) - w; }, 0.0, rho_max);
}

// ---- validation report ----

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    if (c.offending) os << " at rho=" << c.offending->rho << " q=" << c.offending->q;
    os << "\n";
  }
  return os.str();
}

// ---- model ----

Model::Model(ModelParams params, Unchecked) : p_(std::move(params)) {}

Model::Model(ModelParams params, GridSpec grid) : p_(std::move(params)) {
  auto rep = validate(p_, grid);
  if (!rep.ok()) throw ModelError("invalid model parameters:\n" + rep.summary());
  compute_sigmas();
}

void Model::compute_sigmas() {
  sigmas_ready_ = false;
  sfm_ = rho1(p_.w_minus, Level::Free);
  sfp_ = rho1(p_.w_plus, Level::Free);
  scm_ = rho1(p_.w_minus, Level::Congested);
  scp_ = rho1(p_.w_plus, Level::Congested);
  sigmas_ready_ = true;
}

double Model::pressure(double rho) const { return std::get<PTp>(p_.variant).pressure.value(rho); }
double Model::pressure_d1(double rho) const { return std::get<PTp>(p_.variant).pressure.d1(rho); }
double Model::pressure_d2(double rho) const { return std::get<PTp>(p_.variant).pressure.d2(rho); }

double Model::pta_K() const {
  const auto& a = std::get<PTa>(p_.variant);
  return p_.V_f * a.sigma / (p_.R - a.sigma);
}

double Model::vel_raw(double rho, double q) const {
  if (const auto* a = std::get_if<PTa>(&p_.variant)) {
    double veq = (p_.R / rho - 1.0) * (pta_K() + a->a * (a->sigma - rho));
    return veq * (1.0 + q);
  }
  return q / rho - pressure(rho);
}

double Model::velocity(const State& u) const {
  if (!(u.rho >= -kBandTol) || u.rho > p_.R * (1.0 + kBandTol))
    throw DomainError("density outside [0, R]");
  if (u.rho <= kVacuumRho) {
    if (std::abs(u.q) <= kBandTol) return p_.V_f;
    if (p_.is_pta() && std::abs(u.q - q_free(0.0)) <= kBandTol) return p_.V_f;
    throw UndefinedVelocity("velocity undefined at rho=0 with nonzero q");
  }
  return vel_raw(u.rho, u.q);
}

double Model::flux(const State& u) const {
  if (u.rho <= kVacuumRho) {
    velocity(u);  // domain check only
    return 0.0;
  }
  return u.rho * velocity(u);
}

double Model::marker(const State& u) const {
  if (u.rho <= kVacuumRho) return p_.w_minus - p_.V_f;
  if (sigmas_ready_ && u.rho < sfm_ - kBandTol)
    return p_.w_minus + p_.V_f * (u.rho / sfm_ - 1.0);
  return u.q / u.rho;
}

double Model::q_free(double rho) const {
  if (sigmas_ready_ && (rho < -kBandTol || rho > sfp_ + kBandTol))
    throw DomainError("free curve evaluated outside [0, sigma_f_plus]");
  if (const auto* a = std::get_if<PTa>(&p_.variant)) {
    double R = p_.R, s = a->sigma, Vf = p_.V_f;
    return (rho - s) * (Vf * R + a->a * (R - rho) * (R - s)) /
           ((R - rho) * (Vf * s + a->a * (s - rho) * (R - s)));
  }
  return rho * (p_.V_f + pressure(rho));
}

double Model::lax1_value(double w, double rho) const {
  if (const auto* a = std::get_if<PTa>(&p_.variant))
    return (p_.R - rho) * (pta_K() + a->a * (a->sigma - rho)) * (1.0 + w * rho);
  return rho * (w - pressure(rho));
}

double Model::lax1_d1(double w, double rho) const {
  if (const auto* a = std::get_if<PTa>(&p_.variant)) {
    double g = pta_K() + a->a * (a->sigma - rho);
    double h = 1.0 + w * rho;
    double Rr = p_.R - rho;
    return -g * h - a->a * Rr * h + w * Rr * g;
  }
  return w - pressure(rho) - rho * pressure_d1(rho);
}

double Model::lax1_d2(double w, double rho) const {
  if (const auto* a = std::get_if<PTa>(&p_.variant)) {
    double g = pta_K() + a->a * (a->sigma - rho);
    return 2.0 * (a->a * (1.0 + w * rho) - w * g - a->a * w * (p_.R - rho));
  }
  return -2.0 * pressure_d1(rho) - rho * pressure_d2(rho);
}

double Model::curve_velocity(double w, double rho) const { return vel_raw(rho, w * rho); }

double Model::lambda1(const State& u) const {
  if (!in_congested_ex(u)) throw DomainError("lambda1 needs a state in the extended congested set");
  return lax1_d1(u.q / u.rho, u.rho);
}

double Model::lambda2(const State& u) const { return velocity(u); }

double Model::rho1_0(double w) const {
  if (p_.is_pta()) return p_.R;
  return std::get<PTp>(p_.variant).pressure.inverse(w, p_.R);
}

State Model::curve_point(double w, double v) const {
  if (sigmas_ready_) {
    if (w == p_.w_minus && v == p_.V_f) return u_f_minus();
    if (w == p_.w_plus && v == p_.V_f) return u_f_plus();
    if (w == p_.w_minus && v == p_.V_c) return u_c_minus();
    if (w == p_.w_plus && v == p_.V_c) return u_c_plus();
  }
  double r0 = rho1_0(w);
  if (v <= 0.0) return {r0, w * r0};
  double lo = r0 * 1e-12;
  auto g = [&](double r) { return curve_velocity(w, r) - v; };
  if (g(lo) < 0.0) throw InfeasibleError("velocity not attained on the Lax curve");
  double r = numerics::find_root(g, lo, r0);
  return {r, w * r};
}

State Model::state_from_rho_v(double rho, double v) const {
  if (rho <= kVacuumRho) return {0.0, 0.0};
  if (const auto* a = std::get_if<PTa>(&p_.variant)) {
    double veq = (p_.R / rho - 1.0) * (pta_K() + a->a * (a->sigma - rho));
    if (veq <= 0.0) throw DomainError("velocity cannot be prescribed at rho=R");
    return {rho, v / veq - 1.0};
  }
  return {rho, rho * (v + pressure(rho))};
}

double Model::rho1(double w, Level level) const {
  return curve_point(w, level == Level::Free ? p_.V_f : p_.V_c).rho;
}

double Model::rho2(double v, Side side) const {
  return curve_point(side == Side::Minus ? p_.w_minus : p_.w_plus, v).rho;
}

State Model::psi1(const State& u, Level level) const {
  double w = std::clamp(marker(u), p_.w_minus, p_.w_plus);
  return curve_point(w, level == Level::Free ? p_.V_f : p_.V_c);
}

State Model::psi2(const State& u, Side side) const {
  return curve_point(side == Side::Minus ? p_.w_minus : p_.w_plus, velocity(u));
}

State Model::u_star(const State& um, const State& up) const {
  if (um == up) return um;
  double w = std::clamp(marker(um), p_.w_minus, p_.w_plus);
  return curve_point(w, velocity(up));
}

double Model::rh_speed(const State& a, const State& b) const {
  double dr = b.rho - a.rho;
  if (std::abs(dr) <= 1e-15) throw DegenerateJump("rh speed of two states with equal density");
  return (flux(b) - flux(a)) / dr;
}

// ---- membership ----

bool Model::in_free(const State& u) const {
  if (u.rho < -kBandTol || u.rho > sfp_ + kBandTol) return false;
  if (u.rho <= kVacuumRho) {
    return std::abs(u.q) <= kBandTol ||
           (p_.is_pta() && std::abs(u.q - q_free(0.0)) <= kBandTol);
  }
  double Q = q_free(std::clamp(u.rho, 0.0, sfp_));
  return std::abs(u.q - Q) <= kBandTol * (1.0 + std::abs(Q));
}

bool Model::in_free_minus(const State& u) const {
  return in_free(u) && u.rho < sfm_ - kBandTol;
}

bool Model::in_free_plus(const State& u) const {
  return in_free(u) && u.rho >= sfm_ - kBandTol;
}

bool Model::in_congested(const State& u) const {
  if (intersecting() && in_free_plus(u)) return true;
  if (u.rho <= kVacuumRho || u.rho > p_.R * (1.0 + kBandTol)) return false;
  double w = u.q / u.rho;
  if (w < p_.w_minus - kBandTol || w > p_.w_plus + kBandTol) return false;
  double v = vel_raw(std::min(u.rho, p_.R), u.q);
  return v >= -kBandTol && v <= p_.V_c + kBandTol;
}

bool Model::in_congested_ex(const State& u) const {
  if (u.rho <= kVacuumRho || u.rho > p_.R * (1.0 + kBandTol)) return false;
  double w = u.q / u.rho;
  if (w < p_.w_minus - kBandTol || w > p_.w_plus + kBandTol) return false;
  double v = vel_raw(std::min(u.rho, p_.R), u.q);
  return v >= -kBandTol && v <= p_.V_f + kBandTol;
}

PhaseClass Model::classify(const State& u) const {
  if (!(u.rho >= -kBandTol) || u.rho > p_.R * (1.0 + kBandTol) || !std::isfinite(u.q))
    return PhaseClass::OutOfDomain;
  if (u.rho <= kVacuumRho) return in_free(u) ? PhaseClass::Vacuum : PhaseClass::OutOfDomain;
  bool f = in_free(u);
  bool c = in_congested(u);
  if (f && c) return PhaseClass::CongestedAndFree;
  if (f) return u.rho < sfm_ - kBandTol ? PhaseClass::FreeMinus : PhaseClass::FreePlus;
  if (c) return PhaseClass::CongestedOnly;
  return PhaseClass::OutOfDomain;
}

State Model::snap(const State& u) const {
  auto c = classify(u);
  switch (c) {
    case PhaseClass::OutOfDomain:
      throw DomainError("state (" + std::to_string(u.rho) + ", " + std::to_string(u.q) +
                        ") is outside the domain");
    case PhaseClass::Vacuum:
      return {0.0, 0.0};
    case PhaseClass::FreeMinus:
    case PhaseClass::FreePlus:
    case PhaseClass::CongestedAndFree: {
      double r = std::clamp(u.rho, 0.0, sfp_);
      if (c != PhaseClass::FreeMinus && r < sfm_) r = sfm_;
      if (r == sfm_) return u_f_minus();
      if (r == sfp_) return u_f_plus();
      return free_state(r);
    }
    case PhaseClass::CongestedOnly: {
      double r = std::min(u.rho, p_.R);
      double w = std::clamp(u.q / u.rho, p_.w_minus, p_.w_plus);
      double v = curve_velocity(w, r);
      if (v > p_.V_c) return curve_point(w, p_.V_c);
      if (v < 0.0 || r > rho1_0(w)) return curve_point(w, 0.0);
      return {r, w * r};
    }
  }
  return u;
}

// ---- validation ----

ValidationReport Model::validate(const ModelParams& p, GridSpec grid) {
  ValidationReport rep;
  HypothesisCheck par{"parameters", true, {}, {}};
  auto fail = [&](HypothesisCheck& c, const std::string& why) {
    if (c.passed) c.detail = why;
    c.passed = false;
  };
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.V_f) || !finite(p.V_c) || !finite(p.R) || !finite(p.w_minus) || !finite(p.w_plus))
    fail(par, "non-finite parameter");
  if (!(p.V_f > 0)) fail(par, "V_f must be positive");
  if (!(p.V_c > 0 && p.V_c <= p.V_f)) fail(par, "V_c must lie in (0, V_f]");
  if (!(p.R > 0)) fail(par, "R must be positive");
  if (!(p.w_minus < p.w_plus)) fail(par, "w_minus must be below w_plus");
  if (const auto* a = std::get_if<PTa>(&p.variant)) {
    if (!(a->sigma > 0 && a->sigma < p.R)) fail(par, "sigma must lie in (0, R)");
    else {
      double K = p.V_f * a->sigma / (p.R - a->sigma);
      if (!(K + a->a * (a->sigma - p.R) > 0 && K + a->a * a->sigma > 0))
        fail(par, "equilibrium velocity changes sign on (0, R)");
    }
    if (!(1.0 + p.w_minus * p.R > 0)) fail(par, "1 + w_minus R must be positive");
  } else {
    const auto& law = std::get<PTp>(p.variant).pressure;
    if (!(p.w_minus > 0)) fail(par, "w_minus must be positive for the pressure variant");
    if (!(p.w_plus <= law.value(p.R) * (1.0 + 1e-12)))
      fail(par, "w_plus exceeds p(R); rho1_0(w_plus) would exceed R");
  }
  rep.checks.push_back(par);
  if (!par.passed) return rep;

  Model m(p, Unchecked{});
  HypothesisCheck sig{"sigmas", true, {}, {}};
  try {
    m.compute_sigmas();
    double sfm = m.sfm_, sfp = m.sfp_, scm = m.scm_, scp = m.scp_;
    if (!(0 < sfm && sfm < sfp && sfp < p.R)) fail(sig, "need 0 < sigma_f- < sigma_f+ < R");
    if (!(0 < scm && scm < scp && scp < p.R)) fail(sig, "need 0 < sigma_c- < sigma_c+ < R");
    bool eq = p.V_f == p.V_c;
    if (eq && (sfm != scm || sfp != scp)) fail(sig, "free and congested sigmas differ with V_f = V_c");
    if (!eq && !(sfm < scm && sfp < scp)) fail(sig, "need sigma_f < sigma_c when V_c < V_f");
    auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
    if (rel(m.curve_velocity(p.w_minus, sfm), p.V_f) > 1e-12 ||
        rel(m.curve_velocity(p.w_plus, sfp), p.V_f) > 1e-12 ||
        rel(m.curve_velocity(p.w_minus, scm), p.V_c) > 1e-12 ||
        rel(m.curve_velocity(p.w_plus, scp), p.V_c) > 1e-12)
      fail(sig, "sigma residual above 1e-12");
  } catch (const Error& e) {
    fail(sig, e.what());
  }
  rep.checks.push_back(sig);
  if (!sig.passed) return rep;

  if (!p.is_pta()) {
    HypothesisCheck P{"P", true, {}, {}};
    for (int j = 1; j <= grid.n_rho && P.passed; ++j) {
      double r = p.R * j / grid.n_rho;
      if (!(m.pressure_d1(r) > 0) || !(2 * m.pressure_d1(r) + r * m.pressure_d2(r) > 0)) {
        fail(P, "pressure law violates (P)");
        P.offending = State{r, 0.0};
      }
    }
    rep.checks.push_back(P);
  }

  HypothesisCheck h1{"H1", true, {}, {}}, h2{"H2", true, {}, {}};
  bool pta_linear = p.is_pta() && std::get<PTa>(p.variant).a == 0.0;
  for (int i = 0; i < grid.n_w; ++i) {
    double w = p.w_minus + (p.w_plus - p.w_minus) * i / std::max(1, grid.n_w - 1);
    double lo = m.rho1(w, Level::Free);
    double hi = m.rho1_0(w);
    int sign = 0;
    bool all_zero = true;
    bool curve_ok = true;
    std::optional<State> bad;
    for (int j = 0; j < grid.n_rho; ++j) {
      double r = lo + (hi - lo) * j / std::max(1, grid.n_rho - 1);
      if (h1.passed && !(m.lax1_d1(w, r) < 0)) {
        fail(h1, "lambda1 >= 0");
        h1.offending = State{r, w * r};
      }
      double d2 = m.lax1_d2(w, r);
      if (std::abs(d2) > 1e-14) all_zero = false;
      int s = d2 > 0 ? 1 : (d2 < 0 ? -1 : 0);
      if (j == 0) sign = s;
      if (curve_ok && (s == 0 || s != sign)) {
        curve_ok = false;
        bad = State{r, w * r};
      }
    }
    // PTa with a = 0 is linear on the w = 0 curve
    if (!curve_ok && !(pta_linear && all_zero) && h2.passed) {
      fail(h2, "L_w'' vanishes or changes sign");
      h2.offending = bad;
    }
  }
  rep.checks.push_back(h1);
  rep.checks.push_back(h2);
  return rep;
}

}  // namespace phasetraffic

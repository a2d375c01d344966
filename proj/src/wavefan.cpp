#include "phasetraffic/wavefan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "phasetraffic/errors.hpp"
#include "phasetraffic/numerics.hpp"

namespace phasetraffic {

std::string to_string(WaveKind k) {
  switch (k) {
    case WaveKind::Contact: return "contact";
    case WaveKind::Shock1: return "shock1";
    case WaveKind::Rarefaction1: return "rarefaction1";
    case WaveKind::PhaseTransition: return "phase_transition";
    case WaveKind::StationaryJump: return "stationary_jump";
  }
  return "?";
}

WaveKind wave_kind_from_string(std::string_view s) {
  for (auto k : {WaveKind::Contact, WaveKind::Shock1, WaveKind::Rarefaction1,
                 WaveKind::PhaseTransition, WaveKind::StationaryJump})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown wave kind '" + std::string(s) + "'");
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

State rarefaction_interior(const Model& m, const Wave& wv, double xi) {
  if (xi <= wv.speed_lo) return wv.left;
  if (xi >= wv.speed_hi) return wv.right;
  double w = std::isnan(wv.marker) ? wv.left.q / wv.left.rho : wv.marker;
  double a = std::min(wv.left.rho, wv.right.rho);
  double b = std::max(wv.left.rho, wv.right.rho);
  double r = numerics::find_root([&](double rho) { return m.lax1_d1(w, rho) - xi; }, a, b, 1e-12);
  return {r, w * r};
}

}  // namespace

State eval(const Model& m, const WaveFan& fan, double xi, Trace side) {
  for (const auto& wv : fan.waves) {
    if (wv.is_rarefaction()) {
      if (xi < wv.speed_lo) return wv.left;
      if (xi <= wv.speed_hi) return rarefaction_interior(m, wv, xi);
      continue;
    }
    double s = wv.speed();
    if (xi < s || (xi == s && side == Trace::Minus)) return wv.left;
  }
  return fan.right_state;
}

std::string AdmissibilityReport::summary() const {
  std::string out;
  for (const auto& v : violations) out += v + "\n";
  return out;
}

AdmissibilityReport check_admissible(const Model& m, const WaveFan& fan) {
  AdmissibilityReport rep;
  auto bad = [&](std::size_t k, const std::string& msg) {
    rep.violations.push_back("wave " + std::to_string(k) + ": " + msg);
  };
  constexpr double tol = 1e-10;
  auto near = [](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); };

  if (fan.waves.empty()) {
    if (state_distance(fan.left_state, fan.right_state) > tol)
      rep.violations.push_back("empty fan joins distinct states");
    return rep;
  }
  if (state_distance(fan.left_state, fan.waves.front().left) > tol)
    rep.violations.push_back("left state does not start the chain");
  if (state_distance(fan.right_state, fan.waves.back().right) > tol)
    rep.violations.push_back("right state does not end the chain");

  int pt_in_segment = 0;
  int stationary = 0;
  double prev_hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fan.waves.size(); ++k) {
    const Wave& wv = fan.waves[k];
    if (k > 0 && state_distance(fan.waves[k - 1].right, wv.left) > tol) bad(k, "chain broken");
    if (m.classify(wv.left) == PhaseClass::OutOfDomain ||
        m.classify(wv.right) == PhaseClass::OutOfDomain) {
      bad(k, "state outside the domain");
      continue;
    }
    if (wv.speed_lo < prev_hi - tol) bad(k, "speed order violated");
    if (wv.speed_hi < wv.speed_lo - tol) bad(k, "speed interval reversed");
    prev_hi = std::max(prev_hi, wv.speed_hi);

    double fl = m.flux(wv.left), fr = m.flux(wv.right);
    if (!wv.is_rarefaction()) {
      if (wv.speed_lo != wv.speed_hi) bad(k, "discontinuity with a speed interval");
      double res = wv.speed() * (wv.right.rho - wv.left.rho) - (fr - fl);
      if (std::abs(res) > tol) bad(k, "Rankine-Hugoniot residual " + format_g17(res));
    }
    switch (wv.kind) {
      case WaveKind::Shock1: {
        if (!near(m.marker(wv.left), m.marker(wv.right))) bad(k, "shock leaves its Lax curve");
        double ll = m.lambda1(wv.left), lr = m.lambda1(wv.right);
        if (!(ll >= wv.speed() - tol && wv.speed() >= lr - tol)) bad(k, "Lax inequalities fail");
        break;
      }
      case WaveKind::Rarefaction1: {
        if (!near(m.marker(wv.left), m.marker(wv.right))) bad(k, "rarefaction leaves its Lax curve");
        if (!near(wv.speed_lo, m.lambda1(wv.left)) || !near(wv.speed_hi, m.lambda1(wv.right)))
          bad(k, "rarefaction speeds differ from lambda1");
        break;
      }
      case WaveKind::Contact: {
        bool free_pair = m.in_free(wv.left) && m.in_free(wv.right) && near(wv.speed(), m.V_f());
        double vl = m.velocity(wv.left), vr = m.velocity(wv.right);
        bool second = near(vl, wv.speed()) && near(vr, wv.speed());
        bool first_linear = m.in_congested_ex(wv.left) && m.in_congested_ex(wv.right) &&
                            near(m.marker(wv.left), m.marker(wv.right)) &&
                            near(m.lambda1(wv.left), wv.speed()) &&
                            near(m.lambda1(wv.right), wv.speed());
        if (!free_pair && !second && !first_linear) bad(k, "contact is neither free, 2- nor linear 1-contact");
        break;
      }
      case WaveKind::PhaseTransition: {
        ++pt_in_segment;
        bool ok = (m.in_free(wv.left) && m.in_congested(wv.right)) ||
                  (m.in_congested(wv.left) && m.in_free(wv.right));
        if (!ok) bad(k, "phase transition does not join the two phases");
        if (pt_in_segment > 1) bad(k, "more than one phase transition");
        break;
      }
      case WaveKind::StationaryJump: {
        ++stationary;
        pt_in_segment = 0;
        if (wv.speed() != 0.0) bad(k, "stationary jump with nonzero speed");
        if (!near(fl, fr)) bad(k, "stationary jump does not conserve flux");
        if (stationary > 1) bad(k, "more than one stationary jump");
        break;
      }
    }
  }
  return rep;
}

double tv_of(const Model& m, const WaveFan& fan, Coord c) {
  auto val = [&](const State& u) { return c == Coord::V ? m.velocity(u) : m.marker(u); };
  double tv = 0.0;
  for (const auto& wv : fan.waves) tv += std::abs(val(wv.right) - val(wv.left));
  return tv;
}

std::string serialize(const WaveFan& fan) {
  std::ostringstream os;
  auto st = [&](const State& u) { os << ' ' << format_g17(u.rho) << ' ' << format_g17(u.q); };
  os << "fan";
  st(fan.left_state);
  st(fan.right_state);
  os << '\n';
  for (const auto& w : fan.waves) {
    os << to_string(w.kind) << ' ' << format_g17(w.speed_lo) << ' ' << format_g17(w.speed_hi);
    st(w.left);
    st(w.right);
    os << '\n';
  }
  return os.str();
}

WaveFan parse_fan(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  WaveFan fan;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (!header) {
      if (tag != "fan") throw ConfigError("fan record must start with 'fan'");
      ls >> fan.left_state.rho >> fan.left_state.q >> fan.right_state.rho >> fan.right_state.q;
      if (!ls) throw ConfigError("bad fan header");
      header = true;
      continue;
    }
    Wave w;
    w.kind = wave_kind_from_string(tag);
    ls >> w.speed_lo >> w.speed_hi >> w.left.rho >> w.left.q >> w.right.rho >> w.right.q;
    if (!ls) throw ConfigError("bad wave line: " + line);
    if (w.is_rarefaction()) w.marker = w.left.q / w.left.rho;
    fan.waves.push_back(w);
  }
  if (!header) throw ConfigError("empty fan record");
  return fan;
}

}  // namespace phasetraffic

#include "phasetraffic/wft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "phasetraffic/constrained.hpp"
#include "phasetraffic/riemann.hpp"

namespace phasetraffic::wft {

namespace {

constexpr double kGateTol = 1e-10;
constexpr double kSpeedMerge = 1e-12;
constexpr double kTimeTie = 1e-12;

double pos_tol(double x) { return 1e-10 * (1.0 + std::abs(x)); }

int kind_rank(WaveKind k) {
  switch (k) {
    case WaveKind::StationaryJump: return 4;
    case WaveKind::PhaseTransition: return 3;
    case WaveKind::Shock1: return 2;
    case WaveKind::Rarefaction1: return 1;
    case WaveKind::Contact: return 0;
  }
  return 0;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double far_speed_bound(const Model& m) {
  double b = m.V_f();
  for (int k = 0; k <= 8; ++k) {
    double w = m.w_minus() + (m.w_plus() - m.w_minus()) * k / 8.0;
    b = std::max(b, std::abs(m.lax1_d1(w, m.rho1_0(w))));
    b = std::max(b, std::abs(m.lax1_d1(w, m.rho1(w, Level::Free))));
    b = std::max(b, std::abs(m.lax1_d1(w, m.rho1(w, Level::Congested))));
  }
  return b;
}

}  // namespace

void validate(const Model& m, const SimConfig& cfg) {
  const auto& in = cfg.initial;
  if (in.states.size() != in.breaks.size() + 1)
    throw ConfigError("initial data: need exactly one more state than breakpoints");
  for (std::size_t k = 1; k < in.breaks.size(); ++k)
    if (!(in.breaks[k] > in.breaks[k - 1])) throw ConfigError("initial data: breakpoints must increase");
  for (const auto& u : in.states) {
    try {
      m.snap(u);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("initial data: ") + e.what());
    }
  }
  if (!(cfg.delta_v > 0)) throw ConfigError("delta_v must be positive");
  if (!(cfg.t_end > 0)) throw ConfigError("t_end must be positive");
  if (cfg.gate_F) {
    try {
      check_capacity(m, *cfg.gate_F);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!cfg.profile_times.empty() && (cfg.profile_points < 2 || !(cfg.profile_hi > cfg.profile_lo)))
    throw ConfigError("profile grid needs at least two points on a nonempty interval");
}

std::vector<Wave> discretize(const Model& m, const WaveFan& fan, double delta_v) {
  std::vector<Wave> pieces;
  for (const auto& w : fan.waves) {
    if (!w.is_rarefaction()) {
      pieces.push_back(w);
      continue;
    }
    double va = m.velocity(w.left), vb = m.velocity(w.right);
    int n = std::max(1, static_cast<int>(std::ceil(std::abs(vb - va) / delta_v - 1e-9)));
    State prev = w.left;
    for (int k = 1; k <= n; ++k) {
      State next = k == n ? w.right : m.curve_point(w.marker, va + (vb - va) * k / n);
      Wave p;
      p.kind = WaveKind::Rarefaction1;
      p.left = prev;
      p.right = next;
      p.speed_lo = p.speed_hi = m.rh_speed(prev, next);
      p.marker = w.marker;
      pieces.push_back(p);
      prev = next;
    }
  }
  std::vector<Wave> out;
  for (auto& p : pieces) {
    if (state_distance(p.left, p.right) < kStateTol) continue;
    if (!out.empty() && std::abs(out.back().speed_lo - p.speed_lo) <= kSpeedMerge) {
      out.back().right = p.right;
      if (kind_rank(p.kind) > kind_rank(out.back().kind)) out.back().kind = p.kind;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

double SimTrace::mass_drift() const {
  if (mass.empty()) return 0.0;
  double m0 = mass.front().mass + mass.front().boundary_out;
  double d = 0.0;
  for (const auto& s : mass) d = std::max(d, std::abs(s.mass + s.boundary_out - m0));
  return d / std::max(std::abs(m0), 1e-300);
}

// ---------- front state ----------

FrontState::FrontState(const Model& m, SimConfig cfg) : m_(m), cfg_(std::move(cfg)) {
  validate(m_, cfg_);
  auto breaks = cfg_.initial.breaks;
  auto states = cfg_.initial.states;
  if (cfg_.gate_F && std::find(breaks.begin(), breaks.end(), 0.0) == breaks.end()) {
    // the gate acts on a constant state too
    auto it = std::upper_bound(breaks.begin(), breaks.end(), 0.0);
    std::size_t k = static_cast<std::size_t>(it - breaks.begin());
    breaks.insert(it, 0.0);
    states.insert(states.begin() + static_cast<std::ptrdiff_t>(k), states[k]);
  }
  for (auto& u : states) u = m_.snap(u);
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    double x = breaks[k];
    bool gate = cfg_.gate_F && std::abs(x) <= kGateTol;
    WaveFan fan = solve_at(states[k], states[k + 1], gate);
    auto fr = make_fronts(fan, gate ? 0.0 : x, 0.0);
    Event e;
    e.t = 0.0;
    e.x = x;
    e.at_gate = gate;
    e.kind = "init";
    for (const auto& f : fr) e.out_ids.push_back(f.id);
    fronts_.insert(fronts_.end(), fr.begin(), fr.end());
    init_events_.push_back(e);
  }
}

WaveFan FrontState::solve_at(State l, State r, bool gate) const {
  if (gate) return solve_constrained(m_, *cfg_.gate_F, l, r).fan;
  return solve(m_, l, r);
}

std::vector<Front> FrontState::make_fronts(const WaveFan& fan, double x, double t) {
  std::vector<Front> out;
  for (const auto& w : discretize(m_, fan, cfg_.delta_v)) {
    Front f;
    f.id = next_id_++;
    f.x = x;
    f.left = w.left;
    f.right = w.right;
    f.speed = w.speed_lo;
    if (x == 0.0 && cfg_.gate_F && std::abs(f.speed) <= 1e-10) f.speed = 0.0;
    f.kind = w.kind;
    f.t_born = t;
    f.x_born = x;
    out.push_back(f);
  }
  return out;
}

void FrontState::retire(const Front& f) { dead_.push_back({f.id, f.kind, f.t_born, f.x_born, t_, f.x}); }

std::optional<FrontState::Pending> FrontState::next_pending() const {
  std::optional<Pending> best;
  auto consider = [&](Pending p, double x) {
    p.x = x;
    if (!best) {
      best = p;
      return;
    }
    if (p.t < best->t - kTimeTie || (std::abs(p.t - best->t) <= kTimeTie && x < best->x)) best = p;
  };
  for (std::size_t i = 0; i + 1 < fronts_.size(); ++i) {
    const Front& a = fronts_[i];
    const Front& b = fronts_[i + 1];
    if (!(a.speed > b.speed)) continue;
    double dt = std::max(0.0, (b.x - a.x) / (a.speed - b.speed));
    consider({t_ + dt, 0.0, i, false}, a.x + a.speed * dt);
  }
  if (cfg_.gate_F) {
    for (std::size_t i = 0; i < fronts_.size(); ++i) {
      const Front& f = fronts_[i];
      if (f.x < -kGateTol && f.speed > 0) consider({t_ - f.x / f.speed, 0.0, i, true}, 0.0);
      else if (f.x > kGateTol && f.speed < 0) consider({t_ - f.x / f.speed, 0.0, i, true}, 0.0);
    }
  }
  return best;
}

std::optional<double> FrontState::next_event_time() const {
  auto p = next_pending();
  if (!p) return std::nullopt;
  return p->t;
}

void FrontState::advance_to(double t) {
  double dt = t - t_;
  for (auto& f : fronts_) f.x += f.speed * dt;
  t_ = t;
}

std::optional<Event> FrontState::step() {
  auto p = next_pending();
  if (!p) return std::nullopt;
  std::size_t i = p->i;
  advance_to(p->t);
  double xc;
  if (p->gate) {
    xc = 0.0;
  } else {
    xc = 0.5 * (fronts_[i].x + fronts_[i + 1].x);
  }
  bool gate = cfg_.gate_F && std::abs(xc) <= 10 * kGateTol;
  if (gate) xc = 0.0;
  double tol = gate ? kGateTol : pos_tol(xc);
  std::size_t lo = i, hi = p->gate ? i : i + 1;
  while (lo > 0 && std::abs(fronts_[lo - 1].x - xc) <= tol) --lo;
  while (hi + 1 < fronts_.size() && std::abs(fronts_[hi + 1].x - xc) <= tol) ++hi;
  return resolve(t_, xc, lo, hi, gate);
}

Event FrontState::resolve(double t, double x, std::size_t lo, std::size_t hi, bool gate) {
  State l = fronts_[lo].left, r = fronts_[hi].right;
  WaveFan fan = solve_at(l, r, gate);
  auto fresh = make_fronts(fan, x, t);
  Event e;
  e.t = t;
  e.x = x;
  e.at_gate = gate;
  e.kind = gate ? "gate" : "interaction";
  for (std::size_t k = lo; k <= hi; ++k) {
    fronts_[k].x = x;
    e.in_ids.push_back(fronts_[k].id);
    e.in_kinds.push_back(fronts_[k].kind);
    retire(fronts_[k]);
  }
  for (const auto& f : fresh) e.out_ids.push_back(f.id);
  fronts_.erase(fronts_.begin() + static_cast<std::ptrdiff_t>(lo),
                fronts_.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  fronts_.insert(fronts_.begin() + static_cast<std::ptrdiff_t>(lo), fresh.begin(), fresh.end());
  return e;
}

State FrontState::state_at(double x) const {
  for (const auto& f : fronts_)
    if (f.x > x) return f.left;
  if (fronts_.empty()) return m_.snap(cfg_.initial.states.front());
  return fronts_.back().right;
}

State FrontState::gate_trace(Trace side) const {
  // traces an instant later: fronts sitting at 0 with nonzero speed leave at once
  auto left_of_gate = [](const Front& f) {
    return f.x < -kGateTol || (std::abs(f.x) <= kGateTol && f.speed < 0);
  };
  auto right_of_gate = [](const Front& f) {
    return f.x > kGateTol || (std::abs(f.x) <= kGateTol && f.speed > 0);
  };
  if (fronts_.empty()) return m_.snap(cfg_.initial.states.front());
  if (side == Trace::Minus) {
    State u = fronts_.front().left;
    for (const auto& f : fronts_)
      if (left_of_gate(f)) u = f.right;
    return u;
  }
  for (const auto& f : fronts_)
    if (right_of_gate(f)) return f.left;
  return fronts_.back().right;
}

double FrontState::mass(double lo, double hi) const {
  double total = 0.0;
  double a = lo;
  State cur = fronts_.empty() ? m_.snap(cfg_.initial.states.front()) : fronts_.front().left;
  for (const auto& f : fronts_) {
    double b = std::clamp(f.x, lo, hi);
    if (b > a) total += cur.rho * (b - a);
    a = std::max(a, b);
    cur = f.right;
  }
  if (hi > a) total += cur.rho * (hi - a);
  return total;
}

// ---------- driver ----------

std::vector<ProfileRecord> sample_profile(const FrontState& s, const std::vector<double>& xs) {
  const Model& m = s.model();
  std::vector<ProfileRecord> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    State u = s.state_at(x);
    rows.push_back({s.time(), x, u.rho, u.q, m.velocity(u), m.marker(u)});
  }
  return rows;
}

SimTrace run(const Model& m, const SimConfig& cfg) {
  FrontState s(m, cfg);
  SimTrace tr;
  tr.events = s.initial_events();

  double S = far_speed_bound(m);
  for (const auto& f : s.fronts()) S = std::max(S, std::abs(f.speed));
  double xl = cfg.initial.breaks.empty() ? 0.0 : cfg.initial.breaks.front();
  double xr = cfg.initial.breaks.empty() ? 0.0 : cfg.initial.breaks.back();
  tr.window_lo = std::min(xl, 0.0) - S * cfg.t_end - 1.0;
  tr.window_hi = std::max(xr, 0.0) + S * cfg.t_end + 1.0;
  double f_left = m.flux(m.snap(cfg.initial.states.front()));
  double f_right = m.flux(m.snap(cfg.initial.states.back()));

  std::vector<double> xs;
  if (!cfg.profile_times.empty()) {
    for (std::size_t k = 0; k < cfg.profile_points; ++k)
      xs.push_back(cfg.profile_lo + (cfg.profile_hi - cfg.profile_lo) * k / (cfg.profile_points - 1));
  }
  auto ptimes = cfg.profile_times;
  std::sort(ptimes.begin(), ptimes.end());
  std::size_t pk = 0;

  auto record = [&]() {
    double t = s.time();
    tr.mass.push_back({t, s.mass(tr.window_lo, tr.window_hi), (f_right - f_left) * t});
    if (cfg.gate_F)
      tr.gate_flux.push_back({t, m.flux(s.gate_trace(Trace::Minus)), m.flux(s.gate_trace(Trace::Plus))});
    tr.max_fronts = std::max(tr.max_fronts, s.fronts().size());
  };
  auto profiles_until = [&](double t) {
    while (pk < ptimes.size() && ptimes[pk] <= t) {
      if (ptimes[pk] >= s.time()) {
        s.advance_to(ptimes[pk]);
        auto rows = sample_profile(s, xs);
        tr.profiles.insert(tr.profiles.end(), rows.begin(), rows.end());
      }
      ++pk;
    }
  };
  auto outflow_until = [&](double t) {
    if (cfg.gate_F) tr.gate_outflow += m.flux(s.gate_trace(Trace::Minus)) * (t - s.time());
  };

  record();
  std::size_t n_events = 0;
  for (;;) {
    auto te = s.next_event_time();
    if (!te || *te > cfg.t_end) break;
    outflow_until(*te);
    profiles_until(*te);
    auto e = s.step();
    if (!e) break;
    tr.events.push_back(*e);
    record();
    if (++n_events >= cfg.max_events) {
      tr.paths = s.dead_paths();
      throw SimulationOverflow("event cap reached at t=" + g17(s.time()), tr);
    }
  }
  outflow_until(cfg.t_end);
  profiles_until(cfg.t_end);
  s.advance_to(cfg.t_end);
  record();

  tr.paths = s.dead_paths();
  for (const auto& f : s.fronts()) tr.paths.push_back({f.id, f.kind, f.t_born, f.x_born, s.time(), f.x});
  if (cfg.label_cascade) label_tollgate_cascade(tr);
  return tr;
}

// ---------- toll-gate labels ----------

std::map<std::string, std::size_t> label_tollgate_cascade(SimTrace& tr) {
  auto& ev = tr.events;
  std::vector<std::size_t> init;
  for (std::size_t k = 0; k < ev.size(); ++k)
    if (ev[k].kind == "init" && !ev[k].at_gate) init.push_back(k);
  std::map<std::string, std::size_t> lab;
  if (init.size() < 2) return lab;
  const auto& pt1 = ev[init[0]].out_ids;
  const auto& c1 = ev[init[1]].out_ids;
  auto touches = [](const Event& e, const std::vector<int>& ids) {
    for (int id : e.in_ids)
      if (std::find(ids.begin(), ids.end(), id) != ids.end()) return true;
    return false;
  };
  for (std::size_t k = 0; k < ev.size(); ++k) {
    if (ev[k].kind == "init") continue;
    if (!lab.count("a1") && touches(ev[k], c1)) lab["a1"] = k;
    if (!lab.count("a2") && touches(ev[k], pt1)) lab["a2"] = k;
    if (!lab.count("a4") && ev[k].at_gate && lab.count("a1")) lab["a4"] = k;
  }
  if (lab.count("a2") && !ev[lab["a2"]].out_ids.empty()) {
    int tail = ev[lab["a2"]].out_ids.front();
    std::optional<std::size_t> last_rare;
    for (std::size_t k = lab["a2"] + 1; k < ev.size(); ++k) {
      const auto& e = ev[k];
      if (std::find(e.in_ids.begin(), e.in_ids.end(), tail) == e.in_ids.end()) continue;
      bool rare = false, shock = false;
      for (std::size_t j = 0; j < e.in_ids.size(); ++j) {
        if (e.in_ids[j] == tail) continue;
        rare |= e.in_kinds[j] == WaveKind::Rarefaction1;
        shock |= e.in_kinds[j] == WaveKind::Shock1;
      }
      if (e.at_gate && !lab.count("a6")) {
        lab["a6"] = k;
        break;
      }
      if (shock && !lab.count("a5")) {
        if (last_rare) lab["a3"] = *last_rare;
        lab["a5"] = k;
      } else if (rare && !lab.count("a5")) {
        last_rare = k;
      }
      if (e.out_ids.empty()) break;
      tail = e.out_ids.front();
    }
    if (!lab.count("a3") && last_rare) lab["a3"] = *last_rare;
  }
  for (const auto& [name, k] : lab) ev[k].label = name;
  tr.labels = lab;
  return lab;
}

// ---------- output ----------

std::string profile_csv(const std::vector<ProfileRecord>& rows) {
  std::ostringstream os;
  os << "t,x,rho,q,v,w\n";
  for (const auto& r : rows)
    os << g17(r.t) << ',' << g17(r.x) << ',' << g17(r.rho) << ',' << g17(r.q) << ',' << g17(r.v) << ','
       << g17(r.w) << '\n';
  return os.str();
}

std::string events_csv(const std::vector<Event>& events) {
  auto ids = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
    return s;
  };
  std::ostringstream os;
  os << "t,x,in_ids,out_ids,kind\n";
  for (const auto& e : events)
    os << g17(e.t) << ',' << g17(e.x) << ',' << ids(e.in_ids) << ',' << ids(e.out_ids) << ',' << e.kind
       << (e.label.empty() ? "" : ":" + e.label) << '\n';
  return os.str();
}

std::string spacetime_svg(const SimTrace& tr, double t_end) {
  double xlo = 0.0, xhi = 0.0;
  for (const auto& p : tr.paths) {
    xlo = std::min({xlo, p.x0, p.x1});
    xhi = std::max({xhi, p.x0, p.x1});
  }
  // keep the picture near the data rather than the whole mass window
  xlo = std::max(xlo, tr.window_lo);
  xhi = std::min(xhi, tr.window_hi);
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  const double W = 800, H = 600, pad = 40;
  auto X = [&](double x) { return pad + (x - xlo) / (xhi - xlo) * (W - 2 * pad); };
  auto T = [&](double t) { return H - pad - t / t_end * (H - 2 * pad); };
  auto style = [](WaveKind k) -> const char* {
    switch (k) {
      case WaveKind::Contact: return "stroke:#1f77b4;stroke-dasharray:4 3";
      case WaveKind::Shock1: return "stroke:#d62728;stroke-width:1.5";
      case WaveKind::Rarefaction1: return "stroke:#2ca02c;stroke-width:0.5";
      case WaveKind::PhaseTransition: return "stroke:#000000;stroke-width:1.5";
      case WaveKind::StationaryJump: return "stroke:#9467bd;stroke-width:2";
    }
    return "stroke:#000";
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << X(0) << "\" y1=\"" << T(0) << "\" x2=\"" << X(0) << "\" y2=\"" << T(t_end)
     << "\" style=\"stroke:#bbbbbb\"/>\n";
  for (const auto& p : tr.paths) {
    os << "<polyline id=\"f" << p.id << "\" class=\"" << to_string(p.kind) << "\" fill=\"none\" style=\""
       << style(p.kind) << "\" points=\"" << X(p.x0) << ',' << T(p.t0) << ' ' << X(p.x1) << ',' << T(p.t1)
       << "\"/>\n";
  }
  os << "<text x=\"" << pad << "\" y=\"" << H - 10 << "\" font-size=\"12\">x</text>\n";
  os << "<text x=\"10\" y=\"" << pad << "\" font-size=\"12\">t</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace phasetraffic::wft

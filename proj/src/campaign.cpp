#include "phasetraffic/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "phasetraffic/errors.hpp"

namespace phasetraffic::campaign {

using namespace analysis;

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Collector {
 public:
  Collector(const Model& m, Result& r) : m_(m), r_(r) {}

  Summary& open(const std::string& suite, const std::string& check, bool negative = false) {
    r_.summaries.push_back({suite, check, 0, 0, negative, {}});
    return r_.summaries.back();
  }

  void add(const std::string& suite, const std::string& check, State ul, State ur, double a, double b,
           bool pass) {
    Summary* s = find(suite, check);
    if (!s) s = &open(suite, check);
    r_.rows.push_back({suite, check, s->n, ul, ur, to_string(m_.classify(ul)), to_string(m_.classify(ur)), a, b, pass});
    ++s->n;
    if (pass) ++s->passed;
  }

  Summary* find(const std::string& suite, const std::string& check) {
    for (auto& s : r_.summaries)
      if (s.suite == suite && s.check == check) return &s;
    return nullptr;
  }

 private:
  const Model& m_;
  Result& r_;
};

// pairs whose special-case membership sits within 1e-6 of a switch
bool near_special_boundary(const Model& mS, double F, State ul, State ur) {
  constexpr double band = 1e-6;
  ul = mS.snap(ul);
  ur = mS.snap(ur);
  std::vector<double> edges{mS.flux(ul), mS.flux(mS.u_c_minus())};
  if (mS.in_congested(ul) || mS.in_free_plus(ul)) {
    edges.push_back(mS.flux(mS.psi1(ul, Level::Congested)));
    edges.push_back(mS.flux(mS.psi1(ul, Level::Free)));
  }
  for (double e : edges)
    if (std::abs(F - e) < band) return true;
  if (mS.in_free(ur)) {
    try {
      auto check = select_hat_check_S(mS, F, ul, ur).second;
      if (std::abs(mS.marker(ur) - mS.marker(check)) < band) return true;
    } catch (const Error&) {
      return true;
    }
  }
  return false;
}

std::optional<Model> relaxed_model(const Model& m) {
  ModelParams p = m.params();
  p.V_c = p.V_f;
  try {
    return Model(p);
  } catch (const ModelError&) {
    return std::nullopt;
  }
}

void suite_admissibility(const Model& m, double F, const Options& o, Collector& c) {
  SolverKind u = m.intersecting() ? SolverKind::R : SolverKind::S;
  Sampler s(m, o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    auto [ul, ur] = s.pair(PairFamily::Any);
    WaveFan fan = run_solver(m, u, F, ul, ur);
    c.add("admissibility", "admissible_" + to_string(u), ul, ur, 0, 0, check_admissible(m, fan).ok());
    ConstrainedSplit sp = solve_constrained(m, F, ul, ur);
    std::string k = m.intersecting() ? "RF" : "SF";
    c.add("admissibility", "admissible_" + k, ul, ur, 0, 0, check_admissible(m, sp.fan).ok());
    double fm = m.flux(eval(m, sp.fan, 0.0, Trace::Minus));
    double fp = m.flux(eval(m, sp.fan, 0.0, Trace::Plus));
    c.add("admissibility", "gate_trace_flux", ul, ur, fm, fp, std::max(fm, fp) <= F + 1e-12);
    if (sp.region == Region::D2) {
      double d = std::abs(m.flux(sp.u_hat) - m.flux(sp.u_check));
      c.add("admissibility", "gate_flux_match_D2", ul, ur, d, 0, d <= 1e-10);
    }
  }
}

void suite_consistency(const Model& m, double F, const Options& o, Collector& c) {
  SolverKind u = m.intersecting() ? SolverKind::R : SolverKind::S;
  SolverKind k = m.intersecting() ? SolverKind::RF : SolverKind::SF;
  auto rep = consistency_suite(m, u, F, o.samples, o.seed + 1, true, true, -1.0);
  for (const auto& cs : rep.cases_I) c.add("consistency", "I_" + to_string(u), cs.u_l, cs.u_r, cs.gap, cs.xi, cs.holds);
  for (const auto& cs : rep.cases_II)
    c.add("consistency", "II_" + to_string(u), cs.u_l, cs.u_r, cs.gap, cs.xi, cs.holds);
  auto rk = consistency_suite(m, k, F, o.samples, o.seed + 2, false, true, -1.0);
  for (const auto& cs : rk.cases_II) c.add("consistency", "II_" + to_string(k), cs.u_l, cs.u_r, cs.gap, cs.xi, cs.holds);
  auto& s = c.open("consistency", "I_" + to_string(k) + "_counterexample", true);
  auto ce = restriction_counterexamples(m, F, std::min<std::size_t>(o.samples, 100), o.seed + 3);
  if (ce.empty()) s.note = "no counterexample pairs exist for this F";
  for (const auto& cs : ce)
    c.add("consistency", "I_" + to_string(k) + "_counterexample", cs.u_l, cs.u_r, cs.gap, cs.xi, !cs.holds);
}

void suite_tv(const Model& m, double F, const Options& o, Collector& c) {
  SolverKind k = m.intersecting() ? SolverKind::RF : SolverKind::SF;
  Sampler s(m, o.seed + 4);
  const PairFamily fams[] = {PairFamily::FreeFree, PairFamily::CongCong, PairFamily::CongFree, PairFamily::FreeCong};
  std::size_t per = std::max<std::size_t>(1, o.samples / 4);
  for (auto fam : fams) {
    for (std::size_t i = 0; i < per; ++i) {
      auto [ul, ur] = s.pair(fam);
      TvReport r = delta_tv(m, F, k, ul, ur);
      bool zero = r.dtv_v <= 1e-10 && r.dtv_w <= 1e-10;
      bool pass = r.dtv_v >= -1e-12 && r.dtv_w >= -1e-12 && zero == r.zero_zone;
      c.add("tv", "sign_and_zero_zone_" + to_string(fam), ul, ur, r.dtv_v, r.dtv_w, pass);
    }
  }
  if (m.intersecting()) return;
  auto mR = relaxed_model(m);
  if (!mR) {
    c.open("tv", "RF_vs_SF").note = "model with V_c = V_f fails validation; comparison skipped";
    return;
  }
  for (auto fam : fams) {
    for (std::size_t i = 0; i < per; ++i) {
      auto [ul, ur] = s.pair(fam);
      if (near_special_boundary(m, F, ul, ur)) continue;
      TvComparison cmp = compare_tv_RF_SF(*mR, m, F, ul, ur);
      c.add("tv", "RF_vs_SF", ul, ur, cmp.s.dtv_v - cmp.r.dtv_v, cmp.s.dtv_w - cmp.r.dtv_w, cmp.ok);
    }
  }
}

void suite_domains(const Model& m, double F, const Options& o, Collector& c) {
  SolverKind k = m.intersecting() ? SolverKind::RF : SolverKind::SF;
  auto closure = [&](const std::string& name, const DomainSpec& spec, bool expect_closed, std::uint64_t seed,
                     const std::string& note) {
    auto rep = closure_test(m, F, spec, k, o.samples, seed);
    auto& s = c.open("invariant_domains", name, !expect_closed);
    s.note = note;
    s.n = 1;
    s.passed = rep.closed() == expect_closed ? 1 : 0;
    for (const auto& u : rep.violators)
      c.add("invariant_domains", name + "_violator", u, u, u.rho, u.q, !expect_closed);
    return rep;
  };
  bool if_closed = m.intersecting() || F <= m.flux(m.u_c_plus());
  closure("I_f", DomainSpec::I_f(F), if_closed, o.seed + 5,
          if_closed ? "" : "F > f(u_+^c): gate states psi1^c(u_l) leave I_1");
  closure("I_c", m.intersecting() ? DomainSpec::I_c_R(F) : DomainSpec::I_c_S(F), true, o.seed + 6, "");
  double thresh = m.intersecting() ? m.V_f() * m.sigma_f_minus() : m.flux(m.u_c_minus());
  bool oc_closed = F >= thresh;
  auto rep = closure("Omega_c", DomainSpec::omega_c(), oc_closed, o.seed + 7,
                     oc_closed ? "" : "expected single violator (F/V, Q(F/V))");
  if (!oc_closed) {
    State p = m.free_state(F / m.V_f());
    bool only = std::all_of(rep.violators.begin(), rep.violators.end(),
                            [&](const State& u) { return state_distance(u, p) <= 1e-9; });
    auto& s = c.open("invariant_domains", "Omega_c_violator_is_F_over_V");
    s.n = 1;
    s.passed = only && !rep.violators.empty() ? 1 : 0;
  }
}

void suite_continuity(const Model& m, double F, const Options& o, Collector& c) {
  std::vector<SolverKind> kinds{m.intersecting() ? SolverKind::R : SolverKind::S};
  if (m.intersecting()) kinds.push_back(SolverKind::RF);
  for (auto kind : kinds) {
    auto rep = l1loc_probe(m, kind, F, o.probe_pairs, o.radii, o.seed + 8, -1.0);
    for (const auto& r : rep.records) {
      bool pass = r.dist == 0 ? r.gap <= 1e-12 : r.gap <= kContinuityC * r.dist;
      c.add("continuity", "l1loc_" + to_string(kind), r.u_l, r.u_r, r.gap, r.dist, pass);
    }
  }
  if (!m.intersecting()) {
    auto& s = c.open("continuity", "SF_discontinuity", true);
    if (!(F > m.flux(m.u_c_minus()))) {
      s.note = "needs F > f(u_-^c); skipped";
      return;
    }
    auto rep = sf_discontinuity_probe(m, F, o.probe_pairs, o.radii, o.seed + 9, -1.0);
    for (const auto& r : rep.records)
      c.add("continuity", "SF_discontinuity", r.u_l, r.u_r, r.gap, r.bound, r.gap >= r.bound);
  }
}

}  // namespace

bool Result::all_pass() const {
  return std::all_of(summaries.begin(), summaries.end(), [](const Summary& s) { return s.ok(); });
}

std::string Result::csv() const {
  std::ostringstream os;
  os << "suite,check,index,rho_l,q_l,rho_r,q_r,class_l,class_r,a,b,pass\n";
  for (const auto& r : rows)
    os << r.suite << ',' << r.check << ',' << r.index << ',' << g17(r.u_l.rho) << ',' << g17(r.u_l.q) << ','
       << g17(r.u_r.rho) << ',' << g17(r.u_r.q) << ',' << r.class_l << ',' << r.class_r << ',' << g17(r.a) << ',' << g17(r.b) << ','
       << (r.pass ? 1 : 0) << '\n';
  return os.str();
}

std::string Result::text() const {
  std::ostringstream os;
  for (const auto& s : summaries) {
    os << (s.ok() ? "ok   " : "FAIL ") << s.suite << '/' << s.check << ": " << s.passed << '/' << s.n;
    if (s.negative) os << " (expected failure of the property)";
    if (!s.note.empty()) os << "  # " << s.note;
    os << '\n';
  }
  os << (all_pass() ? "all checks passed\n" : "some checks failed\n");
  return os.str();
}

Result run(const Model& m, double F, const Options& opt) {
  check_capacity(m, F);
  Result res;
  Collector c(m, res);
  for (const auto& name : opt.suites) {
    if (name == "admissibility") suite_admissibility(m, F, opt, c);
    else if (name == "consistency") suite_consistency(m, F, opt, c);
    else if (name == "tv") suite_tv(m, F, opt, c);
    else if (name == "invariant_domains") suite_domains(m, F, opt, c);
    else if (name == "continuity") suite_continuity(m, F, opt, c);
    else throw UsageError("unknown suite '" + name + "'");
  }
  return res;
}

}  // namespace phasetraffic::campaign

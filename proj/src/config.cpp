#include "phasetraffic/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "phasetraffic/errors.hpp"

namespace phasetraffic::config {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

double num(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

double num_or(const json& j, const std::string& key, double dflt, const std::string& where) {
  return j.contains(key) ? num(j, key, where) : dflt;
}

std::vector<double> num_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(where + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::size_t count(const json& j, const std::string& key, std::size_t dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(where + "." + key + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

StateSpec state(const json& j, const std::string& where) {
  StateSpec s;
  if (j.is_string()) {
    if (j.get<std::string>() != "vacuum") throw ConfigError(where + ": only \"vacuum\" is accepted as a string");
    return s;
  }
  if (j.is_array()) {
    auto v = num_list(j, where);
    if (v.size() != 2) throw ConfigError(where + ": expected [rho, q]");
    s.kind = StateSpec::Kind::RhoQ;
    s.a = v[0];
    s.b = v[1];
    return s;
  }
  if (j.is_object() && j.contains("w")) {
    only_keys(j, where, {"w", "v"});
    s.kind = StateSpec::Kind::WV;
    s.a = num(j, "w", where);
    s.b = num(j, "v", where);
    return s;
  }
  only_keys(j, where, {"rho", "q"});
  s.kind = StateSpec::Kind::RhoQ;
  s.a = num(j, "rho", where);
  s.b = num(j, "q", where);
  return s;
}

ModelParams model(const json& j) {
  const std::string where = "model";
  if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string())
    throw ConfigError("model: missing 'variant'");
  std::string v = j.at("variant").get<std::string>();
  ModelParams p;
  if (v == "PTa") {
    only_keys(j, where, {"variant", "a", "sigma", "V_f", "V_c", "R", "w_minus", "w_plus"});
    p.variant = PTa{num(j, "a", where), num(j, "sigma", where)};
  } else if (v == "PTp") {
    only_keys(j, where, {"variant", "gamma", "V_f", "V_c", "R", "w_minus", "w_plus"});
    double g = num(j, "gamma", where);
    if (!(g > 0)) throw ConfigError("model.gamma must be positive");
    p.variant = PTp{PressureLaw::power(g)};
  } else {
    throw ConfigError("model.variant must be PTa or PTp");
  }
  p.V_f = num(j, "V_f", where);
  p.V_c = num_or(j, "V_c", p.V_f, where);
  p.R = num(j, "R", where);
  p.w_minus = num(j, "w_minus", where);
  p.w_plus = num(j, "w_plus", where);
  return p;
}

SimulationCfg simulation(const json& j) {
  const std::string where = "problem.simulation";
  only_keys(j, where,
            {"breaks", "states", "t_end", "delta_v", "label_cascade", "profile_times", "profile_points",
             "profile_range", "max_events"});
  SimulationCfg s;
  if (!j.contains("states")) throw ConfigError(where + ": missing 'states'");
  s.breaks = j.contains("breaks") ? num_list(j.at("breaks"), where + ".breaks") : std::vector<double>{};
  if (!j.at("states").is_array()) throw ConfigError(where + ".states: expected an array");
  for (std::size_t k = 0; k < j.at("states").size(); ++k)
    s.states.push_back(state(j.at("states")[k], where + ".states[" + std::to_string(k) + "]"));
  s.t_end = num(j, "t_end", where);
  s.delta_v = num_or(j, "delta_v", s.delta_v, where);
  if (j.contains("label_cascade")) {
    if (!j.at("label_cascade").is_boolean()) throw ConfigError(where + ".label_cascade: expected a boolean");
    s.label_cascade = j.at("label_cascade").get<bool>();
  }
  if (j.contains("profile_times")) s.profile_times = num_list(j.at("profile_times"), where + ".profile_times");
  s.profile_points = count(j, "profile_points", s.profile_points, where);
  if (j.contains("profile_range")) {
    auto r = num_list(j.at("profile_range"), where + ".profile_range");
    if (r.size() != 2) throw ConfigError(where + ".profile_range: expected [lo, hi]");
    s.profile_range = std::make_pair(r[0], r[1]);
  }
  s.max_events = count(j, "max_events", s.max_events, where);
  return s;
}

AnalysisCfg analysis(const json& j) {
  const std::string where = "analysis";
  only_keys(j, where, {"suites", "samples", "probe_pairs", "radii", "seed"});
  AnalysisCfg a;
  if (j.contains("suites")) {
    if (!j.at("suites").is_array()) throw ConfigError("analysis.suites: expected an array");
    a.suites.clear();
    for (const auto& s : j.at("suites")) {
      if (!s.is_string()) throw ConfigError("analysis.suites: expected names");
      std::string name = s.get<std::string>();
      const auto& known = known_suites();
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw ConfigError("analysis.suites: unknown suite '" + name + "'");
      a.suites.push_back(name);
    }
  }
  a.samples = count(j, "samples", a.samples, where);
  a.probe_pairs = count(j, "probe_pairs", a.probe_pairs, where);
  if (j.contains("radii")) a.radii = num_list(j.at("radii"), "analysis.radii");
  a.seed = count(j, "seed", a.seed, where);
  return a;
}

OutputCfg output(const json& j) {
  only_keys(j, "output", {"dir", "formats"});
  OutputCfg o;
  if (j.contains("dir")) {
    if (!j.at("dir").is_string()) throw ConfigError("output.dir: expected a string");
    o.dir = j.at("dir").get<std::string>();
  }
  if (j.contains("formats")) {
    o.formats.clear();
    for (const auto& f : j.at("formats")) {
      if (!f.is_string()) throw ConfigError("output.formats: expected names");
      std::string s = f.get<std::string>();
      if (s != "csv" && s != "svg" && s != "txt") throw ConfigError("output.formats: unknown format '" + s + "'");
      o.formats.push_back(s);
    }
  }
  return o;
}

}  // namespace

bool OutputCfg::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"admissibility", "consistency", "tv", "invariant_domains", "continuity"};
  return s;
}

State resolve(const Model& m, const StateSpec& s) {
  try {
    switch (s.kind) {
      case StateSpec::Kind::Vacuum: return {0.0, 0.0};
      case StateSpec::Kind::RhoQ: return m.snap({s.a, s.b});
      case StateSpec::Kind::WV: {
        if (s.a < m.w_minus() - kBandTol || s.a > m.w_plus() + kBandTol || s.b < -kBandTol ||
            s.b > m.V_c() + kBandTol)
          throw DomainError("(w, v) outside the congested box");
        return m.snap(m.curve_point(std::clamp(s.a, m.w_minus(), m.w_plus()), std::max(0.0, s.b)));
      }
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("state out of domain: ") + e.what());
  }
  return {};
}

RunConfig parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "config", {"model", "problem", "constraint", "analysis", "output"});
  if (!j.contains("model")) throw ConfigError("config: missing 'model'");
  RunConfig c;
  c.model = model(j.at("model"));
  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    only_keys(p, "problem", {"riemann", "simulation"});
    if (p.contains("riemann")) {
      const auto& r = p.at("riemann");
      only_keys(r, "problem.riemann", {"u_l", "u_r"});
      if (!r.contains("u_l") || !r.contains("u_r")) throw ConfigError("problem.riemann: need u_l and u_r");
      c.riemann = RiemannCfg{state(r.at("u_l"), "problem.riemann.u_l"), state(r.at("u_r"), "problem.riemann.u_r")};
    }
    if (p.contains("simulation")) c.simulation = simulation(p.at("simulation"));
  }
  if (j.contains("constraint")) {
    only_keys(j.at("constraint"), "constraint", {"F"});
    c.F = num(j.at("constraint"), "F", "constraint");
  }
  if (j.contains("analysis")) c.analysis = analysis(j.at("analysis"));
  if (j.contains("output")) c.output = output(j.at("output"));
  return c;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

wft::SimConfig to_sim_config(const Model& m, const RunConfig& c) {
  if (!c.simulation) throw ConfigError("config has no problem.simulation section");
  const auto& s = *c.simulation;
  wft::SimConfig out;
  out.initial.breaks = s.breaks;
  for (const auto& st : s.states) out.initial.states.push_back(resolve(m, st));
  out.gate_F = c.F;
  out.t_end = s.t_end;
  out.delta_v = s.delta_v;
  out.max_events = s.max_events;
  out.label_cascade = s.label_cascade;
  out.profile_times = s.profile_times;
  out.profile_points = s.profile_points;
  if (s.profile_range) {
    out.profile_lo = s.profile_range->first;
    out.profile_hi = s.profile_range->second;
  } else if (!s.breaks.empty()) {
    double span = s.breaks.back() - s.breaks.front();
    out.profile_lo = s.breaks.front() - 0.25 * span - 1.0;
    out.profile_hi = s.breaks.back() + 0.25 * span + 1.0;
  }
  wft::validate(m, out);
  return out;
}

}  // namespace phasetraffic::config

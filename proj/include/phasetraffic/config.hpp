#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phasetraffic/model.hpp"
#include "phasetraffic/wft.hpp"

namespace phasetraffic::config {

// states may be given as [rho, q], {"rho","q"}, {"w","v"} or "vacuum"
struct StateSpec {
  enum class Kind { RhoQ, WV, Vacuum } kind = Kind::Vacuum;
  double a = 0.0, b = 0.0;
};

State resolve(const Model& m, const StateSpec& s);

struct RiemannCfg {
  StateSpec u_l, u_r;
};

struct SimulationCfg {
  std::vector<double> breaks;
  std::vector<StateSpec> states;
  double t_end = 1.0;
  double delta_v = 1e-3;
  bool label_cascade = false;
  std::vector<double> profile_times;
  std::size_t profile_points = 401;
  std::optional<std::pair<double, double>> profile_range;
  std::size_t max_events = 1000000;
};

struct AnalysisCfg {
  std::vector<std::string> suites{"admissibility", "consistency", "tv", "invariant_domains", "continuity"};
  std::size_t samples = 1000;
  std::size_t probe_pairs = 100;
  std::vector<double> radii{1e-3, 1e-4, 1e-5};
  std::uint64_t seed = 1;
};

struct OutputCfg {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "svg", "txt"};
  bool wants(const std::string& f) const;
};

struct RunConfig {
  ModelParams model;
  std::optional<RiemannCfg> riemann;
  std::optional<SimulationCfg> simulation;
  std::optional<double> F;
  std::optional<AnalysisCfg> analysis;
  OutputCfg output;
};

const std::vector<std::string>& known_suites();

// throws ConfigError on malformed input or unknown keys
RunConfig parse(const std::string& json_text);
RunConfig load(const std::string& path);

wft::SimConfig to_sim_config(const Model& m, const RunConfig& c);

}  // namespace phasetraffic::config

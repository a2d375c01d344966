#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasetraffic/errors.hpp"
#include "phasetraffic/model.hpp"
#include "phasetraffic/wavefan.hpp"

namespace phasetraffic::wft {

struct Front {
  int id = 0;
  double x = 0.0;  // position at FrontState::t
  State left, right;
  double speed = 0.0;
  WaveKind kind = WaveKind::Contact;
  double t_born = 0.0;
  double x_born = 0.0;
};

// states[0] on (-inf, breaks[0]), states[k] on (breaks[k-1], breaks[k]), last on (breaks.back(), inf)
struct InitialData {
  std::vector<double> breaks;
  std::vector<State> states;
};

struct SimConfig {
  InitialData initial;
  std::optional<double> gate_F;  // constraint at x = 0
  double t_end = 1.0;
  double delta_v = 1e-3;
  std::size_t max_events = 1000000;
  std::vector<double> profile_times;
  std::size_t profile_points = 401;
  double profile_lo = -1.0, profile_hi = 1.0;
  bool label_cascade = false;  // toll-gate macro labels a1..a6
};

void validate(const Model& m, const SimConfig& cfg);

struct Event {
  double t = 0.0;
  double x = 0.0;
  std::vector<int> in_ids;
  std::vector<int> out_ids;
  std::vector<WaveKind> in_kinds;
  bool at_gate = false;
  std::string kind;   // init | interaction | gate
  std::string label;  // a1..a6 or empty
};

struct GateSample {
  double t = 0.0;  // traces hold on [t, next t)
  double flux_minus = 0.0;
  double flux_plus = 0.0;
};

struct MassSample {
  double t = 0.0;
  double mass = 0.0;          // integral of rho over the window
  double boundary_out = 0.0;  // cumulative net outflow through the window ends
};

struct ProfileRecord {
  double t, x, rho, q, v, w;
};

struct FrontPath {
  int id;
  WaveKind kind;
  double t0, x0, t1, x1;
};

struct SimTrace {
  std::vector<Event> events;
  std::vector<ProfileRecord> profiles;
  std::vector<GateSample> gate_flux;
  std::vector<MassSample> mass;
  std::vector<FrontPath> paths;
  double gate_outflow = 0.0;  // integral of f(t,0-) dt
  double window_lo = 0.0, window_hi = 0.0;
  std::size_t max_fronts = 0;
  std::map<std::string, std::size_t> labels;  // label -> event index

  double mass_drift() const;  // max relative deviation of mass + boundary_out
};

class SimulationOverflow : public Error {
 public:
  SimulationOverflow(const std::string& what, SimTrace trace) : Error(what), trace_(std::move(trace)) {}
  const SimTrace& trace() const { return trace_; }

 private:
  SimTrace trace_;
};

class FrontState {
 public:
  FrontState(const Model& m, SimConfig cfg);

  double time() const { return t_; }
  const std::vector<Front>& fronts() const { return fronts_; }
  const SimConfig& config() const { return cfg_; }
  const Model& model() const { return m_; }

  // earliest future event time, if any
  std::optional<double> next_event_time() const;
  // advance to the next event and resolve it; nullopt when nothing is left
  std::optional<Event> step();
  // move all fronts to time t (no event may lie in between)
  void advance_to(double t);

  State state_at(double x) const;  // right trace at a front position
  State gate_trace(Trace side) const;
  double mass(double lo, double hi) const;

  const std::vector<Event>& initial_events() const { return init_events_; }
  const std::vector<FrontPath>& dead_paths() const { return dead_; }

 private:
  struct Pending {
    double t;
    double x;        // where it happens
    std::size_t i;   // front index
    bool gate;       // front reaching x = 0
  };
  std::optional<Pending> next_pending() const;
  std::vector<Front> make_fronts(const WaveFan& fan, double x, double t);
  Event resolve(double t, double x, std::size_t lo, std::size_t hi, bool gate);
  WaveFan solve_at(State l, State r, bool gate) const;
  void retire(const Front& f);

  const Model& m_;
  SimConfig cfg_;
  double t_ = 0.0;
  int next_id_ = 0;
  std::vector<Front> fronts_;
  std::vector<Event> init_events_;
  std::vector<FrontPath> dead_;
};

// splits rarefactions into jumps with |dv| <= delta_v, merges equal-speed waves
std::vector<Wave> discretize(const Model& m, const WaveFan& fan, double delta_v);

SimTrace run(const Model& m, const SimConfig& cfg);

std::vector<ProfileRecord> sample_profile(const FrontState& s, const std::vector<double>& xs);

// a1..a6 on a toll-gate run; returns the labels it could place
std::map<std::string, std::size_t> label_tollgate_cascade(SimTrace& trace);

std::string profile_csv(const std::vector<ProfileRecord>& rows);
std::string events_csv(const std::vector<Event>& events);
std::string spacetime_svg(const SimTrace& trace, double t_end);

}  // namespace phasetraffic::wft

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "phasetraffic/constrained.hpp"
#include "phasetraffic/model.hpp"
#include "phasetraffic/riemann.hpp"
#include "phasetraffic/wavefan.hpp"

namespace phasetraffic {

enum class SolverKind { R, S, RF, SF };

std::string to_string(SolverKind k);
SolverKind solver_kind_from_string(const std::string& s);
bool is_constrained(SolverKind k);

// full self-similar solution; constrained kinds return the joined fan
WaveFan run_solver(const Model& m, SolverKind kind, double F, State u_l, State u_r);

}  // namespace phasetraffic

namespace phasetraffic::analysis {

// ---------- invariant domains ----------

struct DomainSpec {
  enum class Kind { If, Ic_R, Ic_S, OmegaF, OmegaC, Custom };
  Kind kind = Kind::OmegaF;
  double F = 0.0;
  std::function<bool(const State&)> predicate;  // Custom only

  static DomainSpec I_f(double F) { return {Kind::If, F, {}}; }
  static DomainSpec I_c_R(double F) { return {Kind::Ic_R, F, {}}; }
  static DomainSpec I_c_S(double F) { return {Kind::Ic_S, F, {}}; }
  static DomainSpec omega_f() { return {Kind::OmegaF, 0.0, {}}; }
  static DomainSpec omega_c() { return {Kind::OmegaC, 0.0, {}}; }
  static DomainSpec custom(std::function<bool(const State&)> p) { return {Kind::Custom, 0.0, std::move(p)}; }
};

bool member(const Model& m, const DomainSpec& spec, const State& u);

// ---------- sampling ----------

enum class PairFamily { FreeFree, CongCong, CongFree, FreeCong, Any };
std::string to_string(PairFamily f);

class Sampler {
 public:
  Sampler(const Model& m, std::uint64_t seed);

  double uniform(double a, double b);
  State free_any();
  State free_minus();
  State free_plus();
  State congested();
  // congested state outside Omega_f^+
  State congested_only();
  State any();
  std::pair<State, State> pair(PairFamily fam);
  // rejection sampling from a domain, mixing free and congested draws
  State in_domain(const DomainSpec& spec);

  std::mt19937_64& engine() { return rng_; }

 private:
  const Model& m_;
  std::mt19937_64 rng_;
};

// fan endpoints, rarefaction interior points and the gate traces
std::vector<State> attained_states(const Model& m, const WaveFan& fan, int interior = 17);

struct ClosureReport {
  std::size_t n_pairs = 0;
  std::vector<std::pair<State, State>> violating_pairs;
  std::vector<State> violators;
  bool closed() const { return violators.empty(); }
};

ClosureReport closure_test(const Model& m, double F, const DomainSpec& spec, SolverKind solver,
                           std::size_t n_pairs, std::uint64_t seed);

enum class MinimalFamily { If, Ic };

struct GeneratorFamily {
  std::string name;
  std::vector<std::pair<State, State>> pairs;
};

std::vector<GeneratorFamily> minimality_generators(const Model& m, double F, MinimalFamily fam,
                                                   std::size_t n_per_family, std::uint64_t seed);

// ---------- total variation ----------

struct TvReport {
  double dtv_v = 0.0;
  double dtv_w = 0.0;
  bool zero_zone = false;
};

// characterization set of pairs with vanishing increments
bool zero_zone(const Model& m, double F, SolverKind solver, State u_l, State u_r);
TvReport delta_tv(const Model& m, double F, SolverKind solver, State u_l, State u_r);

// conditions under which the S_F selection departs from R_F (V = V_f)
int special_case(const Model& mS, double F, State u_l, State u_r);

struct TvComparison {
  TvReport r;  // R_F on the intersecting model
  TvReport s;  // S_F on the non-intersecting model
  int special = 0;
  bool expect_strict_v = false;
  bool expect_strict_w = false;
  bool strict_v = false;
  bool strict_w = false;
  bool ok = true;
};

TvComparison compare_tv_RF_SF(const Model& mR, const Model& mS, double F, State u_l, State u_r);

// ---------- L1 comparisons ----------

struct Profile {
  std::function<State(double)> at;
  std::vector<double> breaks;
};

Profile profile_of(const Model& m, const WaveFan& fan);
// |d rho| + |d(rho v)| + |d(rho w)|: continuous through vacuum for both variants
double profile_metric(const Model& m, const State& a, const State& b);
double l1_distance(const Model& m, const Profile& a, const Profile& b, double lo, double hi);
double l1_distance(const Model& m, const WaveFan& a, const WaveFan& b, double lo, double hi);

// ---------- consistency ----------

struct ConsistencyCase {
  State u_l, u_m, u_r;
  double xi = 0.0;
  double gap = 0.0;
  bool holds = true;
};

// (I): u_m is read off T[u_l,u_r] at xi
ConsistencyCase check_I(const Model& m, SolverKind kind, double F, State u_l, State u_r, double xi,
                        double window);
// (II): the premise must already hold for (u_l,u_m,u_r,xi)
ConsistencyCase check_II(const Model& m, SolverKind kind, double F, State u_l, State u_m, State u_r,
                         double xi, double window);

struct ConsistencyReport {
  std::vector<ConsistencyCase> cases_I;
  std::vector<ConsistencyCase> cases_II;
  std::size_t failures_I() const;
  std::size_t failures_II() const;
};

ConsistencyReport consistency_suite(const Model& m, SolverKind kind, double F, std::size_t n,
                                    std::uint64_t seed, bool do_I, bool do_II, double window = 3.0);

// triples built as in the restriction counterexample: u_l free with
// f(u_l) < F < f(psi2^-(u_r)), u_m = psi2^-(u_r), xi > 0
std::vector<ConsistencyCase> restriction_counterexamples(const Model& m, double F, std::size_t n,
                                                         std::uint64_t seed);

// ---------- continuity ----------

struct ProbeRecord {
  State u_l, u_r;
  double eps = 0.0;
  double dist = 0.0;  // profile_metric(u^eps, u), both sides summed
  double gap = 0.0;   // windowed L1 gap
  double bound = 0.0; // lower bound, discontinuity family only
};

struct ContinuityReport {
  std::vector<ProbeRecord> records;
  double max_ratio() const;  // max gap / dist
};

// random pairs, each state perturbed in its own phase coordinates
ContinuityReport l1loc_probe(const Model& m, SolverKind kind, double F, std::size_t n,
                             const std::vector<double>& radii, std::uint64_t seed, double window = 3.0);

// S_F family with f(u_l) = F > f(u_-^c), perturbed to f(u_l^eps) > F; gap on [-window, 0]
ContinuityReport sf_discontinuity_probe(const Model& mS, double F, std::size_t n,
                                        const std::vector<double>& radii, std::uint64_t seed,
                                        double window = 3.0);

}  // namespace phasetraffic::analysis

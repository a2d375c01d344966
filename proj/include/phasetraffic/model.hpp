#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace phasetraffic {

// u = (rho, q)
struct State {
  double rho = 0.0;
  double q = 0.0;
};

inline bool operator==(const State& a, const State& b) {
  return a.rho == b.rho && a.q == b.q;
}

// l1 distance in the (rho, q) plane
double state_distance(const State& a, const State& b);

constexpr double kBandTol = 1e-9;     // phase membership band
constexpr double kStateTol = 1e-12;   // jumps below this are dropped
constexpr double kVacuumRho = 1e-14;

// p(rho) for the pressure variant. Power laws are the config surface,
// anything else goes through custom() and must satisfy (P) on (0, R].
class PressureLaw {
 public:
  using Fn = std::function<double(double)>;

  static PressureLaw power(double gamma);
  static PressureLaw custom(std::string name, Fn p, Fn dp, Fn d2p);

  double value(double rho) const { return p_(rho); }
  double d1(double rho) const { return dp_(rho); }
  double d2(double rho) const { return d2p_(rho); }
  // p^{-1}(w) on [0, rho_max]
  double inverse(double w, double rho_max) const;

  const std::string& name() const { return name_; }
  std::optional<double> exponent() const { return gamma_; }

 private:
  std::string name_;
  Fn p_, dp_, d2p_;
  std::optional<double> gamma_;
};

struct PTa {
  double a = 0.0;
  double sigma = 0.0;
};

struct PTp {
  PressureLaw pressure = PressureLaw::power(1.0);
};

struct ModelParams {
  std::variant<PTa, PTp> variant;
  double V_f = 1.0;
  double V_c = 1.0;
  double R = 1.0;
  double w_minus = 0.0;
  double w_plus = 0.0;

  bool is_pta() const { return std::holds_alternative<PTa>(variant); }
};

enum class PhaseClass { Vacuum, FreeMinus, FreePlus, CongestedAndFree, CongestedOnly, OutOfDomain };
enum class Level { Free, Congested };
enum class Side { Minus, Plus };

std::string to_string(PhaseClass c);

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  std::string detail;
  std::optional<State> offending;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool ok() const;
  std::string summary() const;
};

struct GridSpec {
  int n_w = 512;
  int n_rho = 512;
};

class Model {
 public:
  // throws ModelError when validate() fails
  explicit Model(ModelParams params, GridSpec grid = {});

  static ValidationReport validate(const ModelParams& params, GridSpec grid = {});

  const ModelParams& params() const { return p_; }
  double V_f() const { return p_.V_f; }
  double V_c() const { return p_.V_c; }
  double R() const { return p_.R; }
  double w_minus() const { return p_.w_minus; }
  double w_plus() const { return p_.w_plus; }
  double sigma_f_minus() const { return sfm_; }
  double sigma_f_plus() const { return sfp_; }
  double sigma_c_minus() const { return scm_; }
  double sigma_c_plus() const { return scp_; }
  bool intersecting() const { return p_.V_f == p_.V_c; }

  double velocity(const State& u) const;
  double flux(const State& u) const;
  double marker(const State& u) const;
  double q_free(double rho) const;
  State free_state(double rho) const { return {rho, q_free(rho)}; }

  double lambda1(const State& u) const;
  double lambda2(const State& u) const;

  // L_w(rho) = f(rho, w rho) and its rho-derivatives
  double lax1_value(double w, double rho) const;
  double lax1_d1(double w, double rho) const;
  double lax1_d2(double w, double rho) const;
  // velocity along the Lax curve of marker w
  double curve_velocity(double w, double rho) const;

  double rho1_0(double w) const;
  double rho1(double w, Level level) const;
  double rho2(double v, Side side) const;

  // point of the w-curve with velocity v (v <= 0 gives rho1_0(w))
  State curve_point(double w, double v) const;
  // congested state with given density and velocity
  State state_from_rho_v(double rho, double v) const;

  State psi1(const State& u, Level level) const;
  State psi2(const State& u, Side side) const;
  State u_star(const State& u_minus, const State& u_plus) const;
  double rh_speed(const State& a, const State& b) const;

  // u_-^c, u_+^c, u_-^f, u_+^f
  State u_c_minus() const { return {scm_, p_.w_minus * scm_}; }
  State u_c_plus() const { return {scp_, p_.w_plus * scp_}; }
  State u_f_minus() const { return {sfm_, p_.w_minus * sfm_}; }
  State u_f_plus() const { return {sfp_, p_.w_plus * sfp_}; }

  PhaseClass classify(const State& u) const;
  bool in_free(const State& u) const;
  bool in_free_minus(const State& u) const;
  bool in_free_plus(const State& u) const;
  bool in_congested(const State& u) const;
  // Omega_c^ex with the membership band
  bool in_congested_ex(const State& u) const;
  bool in_domain(const State& u) const { return in_free(u) || in_congested(u); }
  bool is_vacuum(const State& u) const { return u.rho <= kVacuumRho; }

  // pull a state lying inside the tolerance band onto the boundary it
  // nearly touches; throws DomainError if it is outside the band
  State snap(const State& u) const;

 private:
  struct Unchecked {};
  Model(ModelParams params, Unchecked);
  void compute_sigmas();

  double pressure(double rho) const;
  double pressure_d1(double rho) const;
  double pressure_d2(double rho) const;
  double pta_K() const;
  double vel_raw(double rho, double q) const;

  ModelParams p_;
  double sfm_ = 0, sfp_ = 0, scm_ = 0, scp_ = 0;
  bool sigmas_ready_ = false;
};

}  // namespace phasetraffic

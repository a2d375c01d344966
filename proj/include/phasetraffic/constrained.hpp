#pragma once

#include <utility>

#include "phasetraffic/model.hpp"
#include "phasetraffic/riemann.hpp"
#include "phasetraffic/wavefan.hpp"

namespace phasetraffic {

enum class Region { D1, D2 };

struct ConstrainedSplit {
  Region region = Region::D1;
  State u_hat;    // trace at 0-
  State u_check;  // trace at 0+
  WaveFan left_fan;   // speeds <= 0
  WaveFan right_fan;  // speeds >= 0
  WaveFan fan;        // left_fan + stationary jump + right_fan
};

// F must lie in (0, V_f sigma_f_plus); throws DomainError otherwise
void check_capacity(const Model& m, double F);

Region classify_D(const Model& m, double F, State u_l, State u_r, SolverFamily family);

// valid for pairs in D2
std::pair<State, State> select_hat_check_R(const Model& m, double F, State u_l, State u_r);
std::pair<State, State> select_hat_check_S(const Model& m, double F, State u_l, State u_r);

ConstrainedSplit solve_RF(const Model& m, double F, State u_l, State u_r);
ConstrainedSplit solve_SF(const Model& m, double F, State u_l, State u_r);

// R_F with V = V_f on either kind of model, for comparisons against S_F
ConstrainedSplit solve_RF_relaxed(const Model& m, double F, State u_l, State u_r);

// dispatch on family_of(m)
ConstrainedSplit solve_constrained(const Model& m, double F, State u_l, State u_r);

}  // namespace phasetraffic

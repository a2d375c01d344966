#pragma once

#include "phasetraffic/model.hpp"
#include "phasetraffic/wavefan.hpp"

namespace phasetraffic {

enum class SolverFamily { R, S };

// R for V_f == V_c, S otherwise
SolverFamily family_of(const Model& m);

// 1-wave to u_*(u_l, u_r) followed by a 2-contact at v(u_r)
WaveFan lax_congested(const Model& m, State u_l, State u_r);

// intersecting phases only; throws UsageError otherwise
WaveFan solve_R(const Model& m, State u_l, State u_r);

// non-intersecting phases only; throws UsageError otherwise
WaveFan solve_S(const Model& m, State u_l, State u_r);

// R taken with V = V_f on either kind of model. On non-intersecting models
// 1-discontinuities crossing phases are tagged as phase transitions.
WaveFan solve_R_relaxed(const Model& m, State u_l, State u_r);

// dispatch on family_of(m)
WaveFan solve(const Model& m, State u_l, State u_r);

}  // namespace phasetraffic

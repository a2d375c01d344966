#pragma once

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "phasetraffic/errors.hpp"

namespace phasetraffic::numerics {

// Root of g on [lo, hi]. Endpoints with |g| <= g_tol are accepted even
// without a sign change, which absorbs round-off at curve boundaries.
template <class Fn>
double find_root(Fn&& g, double lo, double hi, double g_tol = 1e-13) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    if (std::abs(glo) <= g_tol && std::abs(glo) <= std::abs(ghi)) return lo;
    if (std::abs(ghi) <= g_tol) return hi;
    throw InfeasibleError("no sign change on [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  }
  std::uintmax_t iters = 300;
  auto r = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace phasetraffic::numerics

#pragma once
// Reference computations for the tests. Deliberately self-contained: closed
// forms and a plain bisection, nothing from the library's numerics.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "phasetraffic/model.hpp"

namespace oracle {

inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
  double glo = g(lo), ghi = g(hi);
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  if ((glo > 0) == (ghi > 0)) throw std::runtime_error("oracle bisection: no sign change");
  for (int k = 0; k < iters; ++k) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm == 0) return mid;
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-17 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

// PTa with a = 0: v_eq(rho) = K (R/rho - 1), K = V_f sigma / (R - sigma)
struct Pta0 {
  double sigma = 0.3, R = 1.0, V_f = 1.0;
  double K() const { return V_f * sigma / (R - sigma); }
  double v(double rho, double q) const { return K() * (R / rho - 1.0) * (1.0 + q); }
  double f(double rho, double q) const { return rho * v(rho, q); }
  double Q(double rho) const { return (rho - sigma) * R / ((R - rho) * sigma); }
  // flux along the marker curve q = w rho
  double L(double w, double rho) const { return K() * (R - rho) * (1.0 + w * rho); }
  // larger root of L(w, rho) = F, the congested branch
  double rho_flux(double w, double F) const {
    // K (R - rho)(1 + w rho) = F  ->  w rho^2 + (1 - w R) rho + (F/K - R) = 0
    double a = w, b = 1.0 - w * R, c = F / K() - R;
    if (std::abs(a) < 1e-15) return -c / b;
    double disc = std::sqrt(b * b - 4 * a * c);
    double r1 = (-b + disc) / (2 * a), r2 = (-b - disc) / (2 * a);
    bool ok1 = r1 > 0 && r1 <= R, ok2 = r2 > 0 && r2 <= R;
    if (ok1 && ok2) return std::max(r1, r2);
    return ok1 ? r1 : r2;
  }
  // rho on the w curve with velocity v
  double rho_velocity(double w, double vel) const {
    return bisect([&](double r) { return v(r, w * r) - vel; }, 1e-9, R);
  }
  // free/congested threshold: v(rho, w rho) = V
  double sigma_w(double w, double V) const { return rho_velocity(w, V); }
};

// PTp with p(rho) = rho^gamma
struct Ptp {
  double gamma = 2.0, R = 2.0, V_f = 1.0;
  double p(double rho) const { return std::pow(rho, gamma); }
  double v(double rho, double q) const { return q / rho - p(rho); }
  double f(double rho, double q) const { return rho * v(rho, q); }
  double Q(double rho) const { return rho * (V_f + p(rho)); }
  double L(double w, double rho) const { return rho * (w - p(rho)); }
  double rho_velocity(double w, double vel) const { return std::pow(w - vel, 1.0 / gamma); }
};

inline phasetraffic::ModelParams pta(double a, double V_c, double sigma = 0.3) {
  phasetraffic::ModelParams p;
  p.variant = phasetraffic::PTa{a, sigma};
  p.V_f = 1.0;
  p.V_c = V_c;
  p.R = 1.0;
  p.w_minus = -0.4;
  p.w_plus = 0.4;
  return p;
}

inline phasetraffic::ModelParams ptp(double V_c) {
  phasetraffic::ModelParams p;
  p.variant = phasetraffic::PTp{phasetraffic::PressureLaw::power(2.0)};
  p.V_f = 1.0;
  p.V_c = V_c;
  p.R = 2.0;
  p.w_minus = 2.0;
  p.w_plus = 3.5;
  return p;
}

}  // namespace oracle

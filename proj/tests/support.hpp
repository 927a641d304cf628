// Test-only helpers: fans and shocks planted by construction, plus
// independent reference computations used as oracles.
#ifndef NSAC_TESTS_SUPPORT_HPP
#define NSAC_TESTS_SUPPORT_HPP

#include <cmath>
#include <stdexcept>

#include "nsac/riemann.hpp"

namespace nsac::testing {

// Volume on the admissible side of `anchor` for which the shock has
// Euclidean strength `delta`, by bisection on the volume jump.
inline ShockWave shock_of_strength(const GasLaw& law, const State& anchor, Family family, Side side,
                                   double delta) {
  const double va = anchor.v();
  const bool grows = (family == Family::two) == (side == Side::left);
  auto strength = [&](double dv) {
    const double vt = grows ? va + dv : va - dv;
    const ShockWave w = hugoniot_locus(law, anchor, family, vt, side);
    return std::hypot(w.right.v() - w.left.v(), w.right.u() - w.left.u());
  };
  double lo = 0.0;
  double hi = grows ? delta : std::min(delta, 0.999 * va);
  while (strength(hi) < delta) {
    if (grows) {
      hi *= 2.0;
    } else {
      hi = 0.5 * (hi + va);
      if (va - hi < 1e-12) throw std::runtime_error("shock_of_strength: unreachable strength");
    }
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * (1.0 + hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    (strength(mid) < delta ? lo : hi) = mid;
  }
  const double dv = 0.5 * (lo + hi);
  return hugoniot_locus(law, anchor, family, grows ? va + dv : va - dv, side);
}

// Two colliding shocks around a planted middle state U*.
struct PlantedFan {
  State minus;
  State star;
  State plus;
};

inline PlantedFan plant_fan(const GasLaw& law, const State& star, double delta1, double delta2) {
  const ShockWave w2 = shock_of_strength(law, star, Family::two, Side::right, delta2);
  const ShockWave w1 = shock_of_strength(law, star, Family::one, Side::left, delta1);
  return {w2.left, star, w1.right};
}

// Middle pressure of the Eulerian isentropic Riemann problem by plain
// bisection on p, using the pressure-velocity form of the wave curves.
inline double bisect_middle_pressure(double gamma, double rho_l, double u_l, double rho_r, double u_r) {
  auto f_side = [gamma](double p, double rho_k) {
    const double p_k = std::pow(rho_k, gamma);
    const double c_k = std::sqrt(gamma * std::pow(rho_k, gamma - 1.0));
    if (p <= p_k) {
      return 2.0 * c_k / (gamma - 1.0) * (std::pow(p / p_k, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
    }
    const double rho = std::pow(p, 1.0 / gamma);
    return std::sqrt((p - p_k) * (1.0 / rho_k - 1.0 / rho));
  };
  auto f = [&](double p) { return f_side(p, rho_l) + f_side(p, rho_r) + u_r - u_l; };
  double lo = 1e-12;
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int k = 0; k < 300; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nsac::testing

#endif

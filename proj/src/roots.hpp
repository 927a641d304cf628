#ifndef NSAC_SRC_ROOTS_HPP
#define NSAC_SRC_ROOTS_HPP

#include <cmath>
#include <sstream>
#include <utility>

#include "nsac/error.hpp"

namespace nsac::detail {

struct RootResult {
  double x;
  double residual;
  int iterations;
};

// Newton's method kept inside a sign-changing bracket [lo, hi]; a step that
// leaves the bracket (or is not finite) is replaced by bisection. `fdf`
// returns (f(x), f'(x)). Converged when |f| <= ftol or the bracket has
// shrunk to round-off.
template <class Fdf>
RootResult safeguarded_newton(Fdf&& fdf, double lo, double hi, double x, double ftol,
                              const char* what, int max_iter = 100) {
  double f_lo = fdf(lo).first;
  double f_hi = fdf(hi).first;
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream os;
    os << what << ": root not bracketed on [" << lo << ", " << hi << "]";
    throw NumericalError(os.str());
  }
  const bool increasing = f_hi > 0.0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  double f = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    auto [fx, dfx] = fdf(x);
    f = fx;
    if (std::abs(f) <= ftol) return {x, f, it};
    if ((f > 0.0) == increasing) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= 4e-16 * std::abs(x)) return {x, f, it};
    double next = x - f / dfx;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    x = next;
  }
  std::ostringstream os;
  os.precision(17);
  os << what << ": no convergence after " << max_iter << " iterations, residual " << f;
  throw NumericalError(os.str());
}

}  // namespace nsac::detail

#endif

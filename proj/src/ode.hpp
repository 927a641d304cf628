#ifndef NSAC_SRC_ODE_HPP
#define NSAC_SRC_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nsac/error.hpp"

namespace nsac::detail {

struct OdeTolerance {
  double rtol = 1e-12;
  double atol = 1e-15;
  double max_step = 0.0;  // 0: unlimited
  long max_steps = 1000000;
};

// Dormand-Prince 5(4) with step-size control. Advances y from t0 to t1
// (either direction) and returns y(t1); `h` carries the last accepted step
// size between calls so a sequence of short intervals stays cheap.
template <std::size_t N, class Rhs>
std::array<double, N> dopri5(Rhs&& f, std::array<double, N> y, double t0, double t1, double& h,
                             const OdeTolerance& tol) {
  using V = std::array<double, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  double t = t0;
  h = std::abs(h);
  if (h == 0.0) h = 1e-3 * std::abs(span);
  if (tol.max_step > 0.0) h = std::min(h, tol.max_step);

  auto axpy = [](const V& base, std::initializer_list<std::pair<double, const V*>> terms, double step) {
    V out = base;
    for (const auto& [coef, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += step * coef * (*k)[i];
    return out;
  };

  V k1 = f(t, y);
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > tol.max_steps) throw NumericalError("dopri5: step budget exhausted");
    bool last = false;
    double hs = h;
    if (hs >= std::abs(t1 - t)) {
      hs = std::abs(t1 - t);
      last = true;
    }
    const double s = dir * hs;
    const V k2 = f(t + c2 * s, axpy(y, {{a21, &k1}}, s));
    const V k3 = f(t + c3 * s, axpy(y, {{a31, &k1}, {a32, &k2}}, s));
    const V k4 = f(t + c4 * s, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, s));
    const V k5 = f(t + c5 * s, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, s));
    const V k6 = f(t + s, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, s));
    const V y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, s);
    const V k7 = f(t + s, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = s * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(ei) / sc);
    }
    if (!std::isfinite(err)) {
      h = 0.25 * hs;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) throw NumericalError("dopri5: non-finite derivative");
      continue;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = last ? t1 : t + s;
      y = y5;
      k1 = k7;
      // keep the proposal from the full step, not from a clipped final one
      if (!last) h = hs * factor;
      if (tol.max_step > 0.0) h = std::min(h, tol.max_step);
    } else {
      h = hs * std::max(factor, 0.1);
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        std::ostringstream os;
        os << "dopri5: step size underflow at t = " << t;
        throw NumericalError(os.str());
      }
    }
  }
  return y;
}

}  // namespace nsac::detail

#endif

#include "nsac/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roots.hpp"

namespace nsac {

namespace {

constexpr double kLaxMargin = 1e-12;
constexpr double kVelocityTol = 1e-13;

double norm2(double a, double b) { return std::hypot(a, b); }

// Lagrangian (mass-coordinate) speed of a shock whose speed may be stored as dx/dt.
double lagrangian_speed(const ShockWave& w) {
  if (w.left.frame() == Frame::lagrangian) return w.speed;
  return (w.speed - w.left.u()) / w.left.v();
}

// |s| for the shock joining volumes va and vb: s^2 = -(p(vb) - p(va)) / (vb - va).
double shock_speed_magnitude(const GasLaw& law, double va, double vb) {
  return std::sqrt(-(pressure_of_volume(law, vb) - pressure_of_volume(law, va)) / (vb - va));
}

// Velocity on a wave curve and its derivative in v. On the shock branches
// sqrt(g), g = (p(v) - p(v_a)) (v_a - v), is the velocity jump magnitude.
struct Branch {
  double u;
  double du;
};

double sqrt_jump_derivative(const GasLaw& law, double va, double v, double root) {
  const double pa = pressure_of_volume(law, va);
  const double p = pressure_of_volume(law, v);
  const double dg = pressure_derivative(law, v) * (va - v) - (p - pa);
  // d sqrt(g)/dv -> -c as v -> va from below
  if (root < 1e-150) return -lagrangian_sound_speed(law, v);
  return dg / (2.0 * root);
}

// Forward 1-wave curve from the left state: shock for v < v_l, rarefaction above.
Branch wave_curve_1(const GasLaw& law, const State& l, double v) {
  const double vl = l.v();
  if (v < vl) {
    const double g = (pressure_of_volume(law, v) - pressure_of_volume(law, vl)) * (vl - v);
    const double root = std::sqrt(std::max(g, 0.0));
    return {l.u() - root, -sqrt_jump_derivative(law, vl, v, root)};
  }
  return {l.u() + riemann_potential(law, vl) - riemann_potential(law, v),
          lagrangian_sound_speed(law, v)};
}

// Backward 2-wave curve from the right state: shock for v < v_r, rarefaction above.
Branch wave_curve_2(const GasLaw& law, const State& r, double v) {
  const double vr = r.v();
  if (v < vr) {
    const double g = (pressure_of_volume(law, v) - pressure_of_volume(law, vr)) * (vr - v);
    const double root = std::sqrt(std::max(g, 0.0));
    return {r.u() + root, sqrt_jump_derivative(law, vr, v, root)};
  }
  return {r.u() - riemann_potential(law, vr) + riemann_potential(law, v),
          -lagrangian_sound_speed(law, v)};
}

State in_frame(const State& s, Frame f) { return s.in_frame(f); }

double eulerian_speed(const State& left, double lagrangian_s) {
  return left.u() + lagrangian_s * left.v();
}

}  // namespace

std::string to_string(Family f) { return f == Family::one ? "1" : "2"; }
std::string to_string(WaveKind k) { return k == WaveKind::shock ? "shock" : "rarefaction"; }

double riemann_potential(const GasLaw& law, double v) {
  const double g = law.gamma();
  return 2.0 * std::sqrt(g) / (g - 1.0) * std::pow(v, -(g - 1.0) / 2.0);
}

double rh_residual(const GasLaw& law, const ShockWave& w) {
  const double s = lagrangian_speed(w);
  const Vec2 ul = w.left.lagrangian_vector();
  const Vec2 ur = w.right.lagrangian_vector();
  const Vec2 fl = lagrangian_flux(law, ul);
  const Vec2 fr = lagrangian_flux(law, ur);
  double r = 0.0;
  for (int k = 0; k < 2; ++k) r = std::max(r, std::abs(-s * (ur[k] - ul[k]) + fr[k] - fl[k]));
  return r;
}

bool satisfies_lax(const GasLaw& law, const ShockWave& w, double margin) {
  const double s = lagrangian_speed(w);
  const int i = index_of(w.family);
  const double lr = eigenvalues(law, w.right)[i];
  const double ll = eigenvalues(law, w.left)[i];
  if (w.family == Family::one) return lr + margin < s && s < ll - margin && ll < 0.0;
  return 0.0 < lr && lr + margin < s && s < ll - margin;
}

ShockWave hugoniot_locus(const GasLaw& law, const State& anchor, Family family, double v_target,
                         Side anchor_side) {
  if (!(v_target > 0.0)) throw DomainError("hugoniot_locus: target volume must be positive");
  const double va = anchor.v();
  if (v_target == va) {
    throw AdmissibilityError("hugoniot_locus: zero-strength (degenerate) wave, v_target equals the anchor volume");
  }
  const double mag = shock_speed_magnitude(law, va, v_target);
  const double s = family == Family::two ? mag : -mag;

  ShockWave w{family, State::lagrangian(va, anchor.u()), State::lagrangian(va, anchor.u()), s};
  // RH first component: u_r - u_l = -s (v_r - v_l).
  if (anchor_side == Side::left) {
    w.right = State::lagrangian(v_target, anchor.u() - s * (v_target - va));
  } else {
    w.left = State::lagrangian(v_target, anchor.u() + s * (va - v_target));
  }
  if (!satisfies_lax(law, w)) {
    std::ostringstream os;
    os << "hugoniot_locus: not an admissible shock for family " << to_string(family)
       << " (anchor v=" << va << " on the " << (anchor_side == Side::left ? "left" : "right")
       << ", target v=" << v_target << ")";
    throw AdmissibilityError(os.str());
  }
  return w;
}

ShockWave hugoniot_locus(const GasLaw& law, const State& anchor, Family family, double v_target) {
  return hugoniot_locus(law, anchor, family, v_target,
                        family == Family::one ? Side::left : Side::right);
}

InteractionPoint interaction_point(double s1, double s2, double x_left, double x_right) {
  if (!(s2 > s1)) throw AdmissibilityError("interaction_point: incoming shocks do not approach each other");
  const double t0 = (x_right - x_left) / (s2 - s1);
  return {x_left + s2 * t0, t0};
}

PostInteraction solve_post_interaction(const GasLaw& law, const State& u_minus, const State& u_plus) {
  const RiemannSolution sol =
      solve_riemann_general(law, u_minus.to_lagrangian(), u_plus.to_lagrangian());
  if (sol.wave(Family::one).kind != WaveKind::shock || sol.wave(Family::two).kind != WaveKind::shock) {
    throw AdmissibilityError("solve_post_interaction: outgoing waves are not two shocks (data not a two-shock configuration)");
  }
  PostInteraction out{sol.middle(), sol.wave(Family::one).slowest, sol.wave(Family::two).slowest};
  const ShockWave w1{Family::one, sol.left(), out.star, out.s1};
  const ShockWave w2{Family::two, out.star, sol.right(), out.s2};
  if (!satisfies_lax(law, w1, kLaxMargin) || !satisfies_lax(law, w2, kLaxMargin)) {
    throw AdmissibilityError("solve_post_interaction: outgoing shocks violate the Lax condition");
  }
  return out;
}

WaveFan solve_two_shock(const GasLaw& law, const State& u_minus_in, const State& u_plus_in,
                        double x_left, double x_right) {
  if (!(x_right > x_left)) throw DomainError("solve_two_shock: jump positions must satisfy x_left < x_right");
  const State um = u_minus_in.to_lagrangian();
  const State up = u_plus_in.to_lagrangian();
  const double vm = um.v();
  const double vp = up.v();
  const double pm = pressure_of_volume(law, vm);
  const double pp = pressure_of_volume(law, vp);

  // U* lies on the 2-Hugoniot leaving U- (v* > v-) and on the 1-Hugoniot
  // arriving at U+ (v* > v+): u- - sqrt((p- - p*)(v* - v-)) = u+ + sqrt((p+ - p*)(v* - v+)).
  auto branch = [&](double v, double va, double pa) -> std::pair<double, double> {
    const double p = pressure_of_volume(law, v);
    const double g = (pa - p) * (v - va);
    const double root = std::sqrt(std::max(g, 0.0));
    const double dg = -pressure_derivative(law, v) * (v - va) + (pa - p);
    const double d = root < 1e-150 ? lagrangian_sound_speed(law, v) : dg / (2.0 * root);
    return {root, d};
  };
  auto fdf = [&](double v) -> std::pair<double, double> {
    auto [rm, dm] = branch(v, vm, pm);
    auto [rp, dp] = branch(v, vp, pp);
    return {(um.u() - rm) - (up.u() + rp), -dm - dp};
  };

  const double lo = std::max(vm, vp);
  if (!(fdf(lo).first > 0.0)) {
    throw AdmissibilityError("solve_two_shock: data not a two-shock configuration (no middle state with two Lax shocks)");
  }
  double hi = 2.0 * lo;
  for (int k = 0; fdf(hi).first >= 0.0; ++k) {
    if (k > 200) throw NumericalError("solve_two_shock: failed to bracket the middle volume");
    hi *= 2.0;
  }
  const double scale = 1.0 + std::max(std::abs(um.u()), std::abs(up.u()));
  const auto root = detail::safeguarded_newton(fdf, lo, hi, 0.5 * (vm + vp), kVelocityTol * scale,
                                               "solve_two_shock");
  const double vs = root.x;
  const double us = um.u() - branch(vs, vm, pm).first;

  WaveFan fan;
  fan.law = law;
  fan.frame = Frame::lagrangian;
  fan.minus = um;
  fan.plus = up;
  fan.star = State::lagrangian(vs, us);
  fan.s2 = shock_speed_magnitude(law, vm, vs);
  fan.s1 = -shock_speed_magnitude(law, vs, vp);
  fan.x_left = x_left;
  fan.x_right = x_right;

  const double tol_rh = 1e-10;
  for (const ShockWave& w : {fan.incoming_1(), fan.incoming_2()}) {
    if (rh_residual(law, w) > tol_rh * (1.0 + std::abs(lagrangian_flux(law, w.left)[1]) +
                                         std::abs(w.left.u()))) {
      throw NumericalError("solve_two_shock: Rankine-Hugoniot residual above tolerance");
    }
    if (!satisfies_lax(law, w, kLaxMargin)) {
      throw AdmissibilityError("solve_two_shock: incoming shock violates the Lax condition");
    }
  }
  const InteractionPoint q = interaction_point(fan.s1, fan.s2, x_left, x_right);
  fan.x0 = q.x0;
  fan.t0 = q.t0;

  const PostInteraction post = solve_post_interaction(law, um, up);
  fan.post_star = post.star;
  fan.post_s1 = post.s1;
  fan.post_s2 = post.s2;
  fan.strengths = wave_strengths(fan);
  return fan;
}

Strengths wave_strengths(const WaveFan& fan) {
  const Vec2 m = fan.minus.lagrangian_vector();
  const Vec2 s = fan.star.lagrangian_vector();
  const Vec2 p = fan.plus.lagrangian_vector();
  const Vec2 q = fan.post_star.lagrangian_vector();
  Strengths d;
  d.incoming1 = norm2(p[0] - s[0], p[1] - s[1]);
  d.incoming2 = norm2(s[0] - m[0], s[1] - m[1]);
  d.outgoing1 = norm2(q[0] - m[0], q[1] - m[1]);
  d.outgoing2 = norm2(p[0] - q[0], p[1] - q[1]);
  d.min_incoming = std::min(d.incoming1, d.incoming2);
  return d;
}

State evaluate_entropy_solution(const WaveFan& fan, double x, double t) {
  if (!(t >= 0.0)) throw DomainError("evaluate_entropy_solution: time must be non-negative");
  if (t <= fan.t0) {
    if (x <= fan.x_left + fan.s2 * t) return fan.minus;
    if (x <= fan.x_right + fan.s1 * t) return fan.star;
    return fan.plus;
  }
  const double dx = x - fan.x0;
  const double dt = t - fan.t0;
  if (dx <= fan.post_s1 * dt) return fan.minus;
  if (dx <= fan.post_s2 * dt) return fan.post_star;
  return fan.plus;
}

WaveFan to_eulerian(const WaveFan& fan) {
  if (fan.frame == Frame::eulerian) return fan;
  WaveFan e = fan;
  e.frame = Frame::eulerian;
  e.minus = fan.minus.to_eulerian();
  e.star = fan.star.to_eulerian();
  e.plus = fan.plus.to_eulerian();
  e.post_star = fan.post_star.to_eulerian();
  e.s2 = eulerian_speed(fan.minus, fan.s2);
  e.s1 = eulerian_speed(fan.star, fan.s1);
  e.post_s1 = eulerian_speed(fan.minus, fan.post_s1);
  e.post_s2 = eulerian_speed(fan.post_star, fan.post_s2);
  const InteractionPoint q = interaction_point(e.s1, e.s2, e.x_left, e.x_right);
  e.x0 = q.x0;
  e.t0 = q.t0;
  return e;
}

// ---------------------------------------------------------------------------

RiemannSolution solve_riemann_general(const GasLaw& law, const State& left_in, const State& right_in) {
  const Frame frame = left_in.frame();
  const State l = left_in.to_lagrangian();
  const State r = right_in.to_lagrangian();
  const double vl = l.v();
  const double vr = r.v();

  double vm = vl;
  if (vl != vr || l.u() != r.u()) {
    // Curves meet at positive v unless u_l + psi(v_l) <= u_r - psi(v_r).
    const double gap = (l.u() + riemann_potential(law, vl)) - (r.u() - riemann_potential(law, vr));
    if (!(gap > 0.0)) {
      std::ostringstream os;
      os << "solve_riemann_general: vacuum forms between the states (u_l + psi_l - u_r + psi_r = " << gap << ")";
      throw AdmissibilityError(os.str());
    }
    auto fdf = [&](double v) -> std::pair<double, double> {
      const Branch b1 = wave_curve_1(law, l, v);
      const Branch b2 = wave_curve_2(law, r, v);
      return {b1.u - b2.u, b1.du - b2.du};
    };
    const double guess = 0.5 * (vl + vr);
    double lo = guess;
    double hi = guess;
    for (int k = 0; fdf(lo).first > 0.0; ++k) {
      if (k > 400) throw NumericalError("solve_riemann_general: failed to bracket the middle volume from below");
      lo *= 0.5;
    }
    for (int k = 0; fdf(hi).first < 0.0; ++k) {
      if (k > 400) throw NumericalError("solve_riemann_general: failed to bracket the middle volume from above");
      hi *= 2.0;
    }
    if (lo == hi) {
      vm = lo;
    } else {
      const double scale = 1.0 + std::max(std::abs(l.u()), std::abs(r.u()));
      vm = detail::safeguarded_newton(fdf, lo, hi, guess, kVelocityTol * scale, "solve_riemann_general").x;
    }
  }
  const State m = vm == vl ? l : State::lagrangian(vm, wave_curve_1(law, l, vm).u);

  auto make_wave = [&](Family fam, const State& a, const State& b) {
    Wave w{fam, WaveKind::shock, a, b, 0.0, 0.0};
    const int i = index_of(fam);
    const bool rarefaction = fam == Family::one ? b.v() > a.v() : b.v() < a.v();
    if (a.v() == b.v()) {
      // zero-strength: a characteristic line
      w.kind = WaveKind::rarefaction;
      w.slowest = w.fastest = eigenvalues(law, a)[i];
    } else if (rarefaction) {
      w.kind = WaveKind::rarefaction;
      w.slowest = eigenvalues(law, a)[i];
      w.fastest = eigenvalues(law, b)[i];
    } else {
      const double mag = shock_speed_magnitude(law, a.v(), b.v());
      w.slowest = w.fastest = fam == Family::one ? -mag : mag;
    }
    if (frame == Frame::eulerian) {
      w.left = a.to_eulerian();
      w.right = b.to_eulerian();
      if (w.kind == WaveKind::shock) {
        w.slowest = w.fastest = eulerian_speed(a, w.slowest);
      } else {
        const double sign = fam == Family::one ? -1.0 : 1.0;
        w.slowest = a.u() + sign * eulerian_sound_speed(law, a.rho());
        w.fastest = b.u() + sign * eulerian_sound_speed(law, b.rho());
      }
    }
    return w;
  };
  const Wave w1 = make_wave(Family::one, l, m);
  const Wave w2 = make_wave(Family::two, m, r);
  return RiemannSolution(law, frame, in_frame(l, frame), in_frame(m, frame), in_frame(r, frame), w1, w2);
}

State RiemannSolution::sample(double xi) const {
  const double g = law_.gamma();
  if (xi <= w1_.fastest) {
    if (xi <= w1_.slowest || w1_.kind == WaveKind::shock) return left_;
    // inside the 1-rarefaction
    if (frame_ == Frame::lagrangian) {
      const double v = std::pow(xi * xi / g, -1.0 / (g + 1.0));
      const double u = left_.u() + riemann_potential(law_, left_.v()) - riemann_potential(law_, v);
      return State::lagrangian(v, u);
    }
    const double cl = eulerian_sound_speed(law_, left_.rho());
    const double c = (g - 1.0) / (g + 1.0) * (left_.u() + 2.0 * cl / (g - 1.0) - xi);
    return State::eulerian(std::pow(c * c / g, 1.0 / (g - 1.0)), xi + c);
  }
  if (xi <= w2_.slowest) return middle_;
  if (xi > w2_.fastest || w2_.kind == WaveKind::shock) return right_;
  if (frame_ == Frame::lagrangian) {
    const double v = std::pow(xi * xi / g, -1.0 / (g + 1.0));
    const double u = right_.u() - riemann_potential(law_, right_.v()) + riemann_potential(law_, v);
    return State::lagrangian(v, u);
  }
  const double cr = eulerian_sound_speed(law_, right_.rho());
  const double c = (g - 1.0) / (g + 1.0) * (xi - (right_.u() - 2.0 * cr / (g - 1.0)));
  return State::eulerian(std::pow(c * c / g, 1.0 / (g - 1.0)), xi - c);
}

}  // namespace nsac

#ifndef NSAC_MODEL_HPP
#define NSAC_MODEL_HPP

#include <array>
#include <span>

#include "nsac/error.hpp"

namespace nsac {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;  // row-major

/// gamma-law with the gas constant fixed at one: p(v) = v^-gamma, p_E(rho) = rho^gamma.
class GasLaw {
 public:
  explicit GasLaw(double gamma);

  double gamma() const noexcept { return gamma_; }
  static constexpr double gas_constant() noexcept { return 1.0; }

 private:
  double gamma_;
};

enum class Frame { lagrangian, eulerian };

/// A constant fluid state. The frame tag decides whether the stored volume
/// variable is the specific volume v or the density rho; v() and rho() convert
/// exactly through v = 1/rho.
class State {
 public:
  static State lagrangian(double v, double u);
  static State eulerian(double rho, double u);

  Frame frame() const noexcept { return frame_; }
  double v() const noexcept { return frame_ == Frame::lagrangian ? q_ : 1.0 / q_; }
  double rho() const noexcept { return frame_ == Frame::eulerian ? q_ : 1.0 / q_; }
  double u() const noexcept { return u_; }

  State to_lagrangian() const { return lagrangian(v(), u_); }
  State to_eulerian() const { return eulerian(rho(), u_); }
  State in_frame(Frame f) const { return f == Frame::lagrangian ? to_lagrangian() : to_eulerian(); }

  /// (v, u) regardless of the frame tag.
  Vec2 lagrangian_vector() const noexcept { return {v(), u_}; }
  static State from_lagrangian_vector(const Vec2& w) { return lagrangian(w[0], w[1]); }

 private:
  State(double q, double u, Frame f) : q_(q), u_(u), frame_(f) {}

  double q_;
  double u_;
  Frame frame_;
};

struct SubCharParam {
  double a;
  double margin;
  // margin == 1 puts a exactly on the characteristic speed at v_min; the
  // sub-characteristic inequality is then not strict.
  bool at_characteristic_speed;
};

struct Eigensystem {
  Mat2 left;    // rows l_1, l_2
  Mat2 right;   // columns r_1, r_2
  Vec2 lambda;  // (lambda_1, lambda_2)
};

// Pressure for either frame tag; both agree under v = 1/rho.
double pressure(const GasLaw& law, const State& s);
double pressure_of_volume(const GasLaw& law, double v);
// dp/dv < 0 for the Lagrangian law.
double pressure_derivative(const GasLaw& law, double v);

/// Lagrangian sound speed sqrt(-p'(v)) = sqrt(gamma v^(-gamma-1)).
double lagrangian_sound_speed(const GasLaw& law, double v);
/// Eulerian sound speed sqrt(gamma rho^(gamma-1)).
double eulerian_sound_speed(const GasLaw& law, double rho);

/// (lambda_1, lambda_2) = (-sqrt(-p'(v)), +sqrt(-p'(v))) of the p-system.
Vec2 eigenvalues(const GasLaw& law, const State& s);

/// Closed-form biorthonormal eigenvectors of F'(U) = [[0, -1], [p'(v), 0]].
Eigensystem eigenvectors(const GasLaw& law, const State& s);

/// Jacobian of the Lagrangian flux F(v, u) = (-u, p(v)).
Mat2 lagrangian_jacobian(const GasLaw& law, const State& s);
Vec2 lagrangian_flux(const GasLaw& law, const State& s);
Vec2 lagrangian_flux(const GasLaw& law, const Vec2& vu);

/// Smallest admissible relaxation speed over [v_min, v_max] scaled by margin.
/// -p' is decreasing in v, so the bound is attained at v_min.
SubCharParam choose_a(const GasLaw& law, double v_min, double v_max, double margin);

/// Eulerian counterpart used by the finite-volume solver: a = margin * max(|u| + c).
SubCharParam choose_a_eulerian(const GasLaw& law, std::span<const State> states, double margin);

/// Eulerian mass and momentum flux including the capillary stress (eps^2/2) chi_x^2.
Vec2 euler_flux(const GasLaw& law, const State& s, double chi_x, double eps);

}  // namespace nsac

#endif

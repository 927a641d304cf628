#include "nsac/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsac {

namespace {

void require_positive(double q, const char* what) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(q));
  }
}

}  // namespace

GasLaw::GasLaw(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw DomainError("adiabatic exponent must exceed 1, got " + std::to_string(gamma));
  }
}

State State::lagrangian(double v, double u) {
  require_positive(v, "specific volume");
  return State(v, u, Frame::lagrangian);
}

State State::eulerian(double rho, double u) {
  require_positive(rho, "density");
  return State(rho, u, Frame::eulerian);
}

double pressure_of_volume(const GasLaw& law, double v) {
  require_positive(v, "specific volume");
  return std::pow(v, -law.gamma());
}

double pressure(const GasLaw& law, const State& s) {
  if (s.frame() == Frame::eulerian) return std::pow(s.rho(), law.gamma());
  return pressure_of_volume(law, s.v());
}

double pressure_derivative(const GasLaw& law, double v) {
  require_positive(v, "specific volume");
  return -law.gamma() * std::pow(v, -law.gamma() - 1.0);
}

double lagrangian_sound_speed(const GasLaw& law, double v) {
  return std::sqrt(-pressure_derivative(law, v));
}

double eulerian_sound_speed(const GasLaw& law, double rho) {
  require_positive(rho, "density");
  return std::sqrt(law.gamma() * std::pow(rho, law.gamma() - 1.0));
}

Vec2 eigenvalues(const GasLaw& law, const State& s) {
  const double c = lagrangian_sound_speed(law, s.v());
  return {-c, c};
}

Eigensystem eigenvectors(const GasLaw& law, const State& s) {
  const double c = lagrangian_sound_speed(law, s.v());
  // r_i = (1, -lambda_i); l_i chosen so that l_i . r_j = delta_ij.
  Eigensystem e;
  e.lambda = {-c, c};
  e.right = {{{1.0, 1.0}, {c, -c}}};
  e.left = {{{0.5, 0.5 / c}, {0.5, -0.5 / c}}};
  return e;
}

Mat2 lagrangian_jacobian(const GasLaw& law, const State& s) {
  return {{{0.0, -1.0}, {pressure_derivative(law, s.v()), 0.0}}};
}

Vec2 lagrangian_flux(const GasLaw& law, const Vec2& vu) {
  return {-vu[1], pressure_of_volume(law, vu[0])};
}

Vec2 lagrangian_flux(const GasLaw& law, const State& s) {
  return lagrangian_flux(law, s.lagrangian_vector());
}

SubCharParam choose_a(const GasLaw& law, double v_min, double v_max, double margin) {
  require_positive(v_min, "v_min");
  if (v_max < v_min) throw DomainError("choose_a: v_max must not be smaller than v_min");
  if (!(margin >= 1.0)) throw DomainError("choose_a: margin must be at least 1");
  const double a = margin * lagrangian_sound_speed(law, v_min);
  return {a, margin, margin == 1.0};
}

SubCharParam choose_a_eulerian(const GasLaw& law, std::span<const State> states, double margin) {
  if (states.empty()) throw DomainError("choose_a_eulerian: no states given");
  if (!(margin >= 1.0)) throw DomainError("choose_a_eulerian: margin must be at least 1");
  double speed = 0.0;
  for (const State& s : states) {
    speed = std::max(speed, std::abs(s.u()) + eulerian_sound_speed(law, s.rho()));
  }
  return {margin * speed, margin, margin == 1.0};
}

Vec2 euler_flux(const GasLaw& law, const State& s, double chi_x, double eps) {
  const double rho = s.rho();
  const double u = s.u();
  return {rho * u, rho * u * u + std::pow(rho, law.gamma()) + 0.5 * eps * eps * chi_x * chi_x};
}

}  // namespace nsac

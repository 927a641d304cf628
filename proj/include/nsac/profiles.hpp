#ifndef NSAC_PROFILES_HPP
#define NSAC_PROFILES_HPP

#include <vector>

#include "nsac/riemann.hpp"

namespace nsac {

/// Traveling wave U(xi), xi = y - s tau, of the relaxation system connecting
/// the two sides of a Lax shock. It solves the once-integrated profile ODE
///
///   (a^2 - s^2) U' = -s (U - U_l) + F(U) - F(U_l),
///
/// sampled on a uniform grid xi_k = xi_min + k * step. The shift b moves the
/// profile: value(xi) = U(xi + b).
class ShockProfile {
 public:
  ShockProfile(GasLaw law, Family family, double speed, State left, State right, double a,
               double xi_min, double step, std::vector<Vec2> samples, double shift = 0.0);

  const GasLaw& law() const noexcept { return law_; }
  Family family() const noexcept { return family_; }
  double speed() const noexcept { return speed_; }
  const State& left() const noexcept { return left_; }
  const State& right() const noexcept { return right_; }
  double a() const noexcept { return a_; }
  double shift() const noexcept { return shift_; }
  double strength() const noexcept;

  double xi_min() const noexcept { return xi_min_; }
  double xi_max() const noexcept { return xi_min_ + step_ * static_cast<double>(samples_.size() - 1); }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double xi(std::size_t k) const noexcept { return xi_min_ + step_ * static_cast<double>(k); }
  /// Raw sample (v, u) at xi(k), ignoring the shift.
  const Vec2& sample(std::size_t k) const noexcept { return samples_[k]; }

  /// Linear interpolation of the shifted profile; constant beyond the grid.
  Vec2 value(double xi) const noexcept;

  ShockProfile with_shift(double shift) const;

 private:
  GasLaw law_;
  Family family_;
  double speed_;
  State left_, right_;
  double a_;
  double xi_min_;
  double step_;
  std::vector<Vec2> samples_;
  double shift_;
};

struct ProfileOptions {
  double truncation_radius = 0.0;  // <= 0: 50 / (slowest linearized end-state decay rate)
  double step = 0.0;               // <= 0: 0.02 / (fastest linearized end-state decay rate)
};

/// Linearized exponential rates with which the profile approaches its left
/// and right end states (both > 0; zero for a zero-strength wave).
struct EndStateRates {
  double left;
  double right;
};
EndStateRates linearized_end_rates(const GasLaw& law, const ShockWave& wave, double a);

/// Builds the profile by shooting from the saddle-type end state along its
/// unstable direction and normalizing xi = 0 at the midpoint volume
/// v = (v_l + v_r)/2. Throws DomainError when a^2 <= s^2 or a violates the
/// sub-characteristic condition on the profile's volume range, and
/// NumericalError when the end states are not reached within 1e-6 * strength
/// at the truncation radius.
ShockProfile compute_profile(const GasLaw& law, const ShockWave& wave, double a,
                             const ProfileOptions& options = {});

struct ProfileDiagnostics {
  double ode_residual = 0.0;           // max-norm, 4th-order differences, over all samples
  double end_residual_left = 0.0;      // |U(xi_min) - U_l|
  double end_residual_right = 0.0;     // |U(xi_max) - U_r|
  double midpoint_v_error = 0.0;       // |v(0) - (v_l + v_r)/2|
  double midpoint_u_offset = 0.0;      // u(0) - (u_l + u_r)/2, the orbit is not a straight line
  bool eigenvalue_monotone = true;     // lambda_family strictly decreasing where resolvable
  std::size_t resolvable_samples = 0;  // samples distinguishable from both end states
  double comparability_constant = 1.0; // c with |d lambda| / |dU| in [1/c, c]
  double tv_excess_v = 0.0;            // TV(v) - |v_r - v_l|
  double tv_excess_u = 0.0;            // TV(u) - |u_r - u_l|
  double decay_rate_left = 0.0;        // fitted exponential rate of |U - U_l| as xi -> -inf
  double decay_rate_right = 0.0;       // fitted exponential rate of |U - U_r| as xi -> +inf
};

ProfileDiagnostics diagnose_profile(const ShockProfile& profile);

/// U^{S1}(y - s1 tau + b1) + U^{S2}(y - s2 tau + b2) - anchor.
class SuperposedProfile {
 public:
  SuperposedProfile(ShockProfile p1, ShockProfile p2, State anchor)
      : p1_(std::move(p1)), p2_(std::move(p2)), anchor_(anchor) {}

  const ShockProfile& first() const noexcept { return p1_; }
  const ShockProfile& second() const noexcept { return p2_; }
  const State& anchor() const noexcept { return anchor_; }

  Vec2 value(double y, double tau) const noexcept;

  /// Adds (b1, b2) to the shifts of the two profiles.
  SuperposedProfile shifted(double b1, double b2) const;

 private:
  ShockProfile p1_, p2_;
  State anchor_;
};

/// Requires p1 of family 1 and p2 of family 2 sharing the anchor state,
/// either before the interaction (p1: U* -> U+, p2: U- -> U*) or after it
/// (p1: U- -> U~*, p2: U~* -> U+). Throws AdmissibilityError on a mismatch
/// above 1e-8.
SuperposedProfile superpose(const ShockProfile& p1, const ShockProfile& p2, const State& anchor);

/// Grid-sampled Lagrangian field (y, (v, u)).
struct SampledField {
  std::vector<double> y;
  std::vector<Vec2> values;
};

SampledField sample_superposition(const SuperposedProfile& sp, double tau, double y_lo, double y_hi,
                                  std::size_t n);

/// Trapezoid rule for the integral of (field - sp(., tau)) over the field's grid.
Vec2 mass_difference(const SampledField& field, const SuperposedProfile& sp, double tau = 0.0);

struct Shifts {
  double b1 = 0.0;
  double b2 = 0.0;
  Vec2 initial_mass{0.0, 0.0};  // I_0 against the unshifted outgoing profiles
  Vec2 residual{0.0, 0.0};      // I(b1, b2) after the shifts are applied
};

/// Shifts (b1, b2) of the outgoing profiles, relative to their current
/// shifts, that make the mass of the perturbation vanish:
/// I_0 = b1 nu1 + b2 nu2 with nu1 = U~* - U-, nu2 = U+ - U~*. A few
/// corrector passes absorb quadrature error so the recomputed integral is
/// below 1e-8 (1 + |I_0|).
Shifts compute_shifts(const SampledField& field_at_zero, const SuperposedProfile& outgoing,
                      const State& u_minus, const State& u_plus);

/// sqrt(sum over a grid of |D|^2 + |D'|^2 + |D''|^2) h for D = a(., tau) - b(., tau);
/// a measured diagnostic for the profile mismatch at the interaction time.
double h2_difference(const SuperposedProfile& a, const SuperposedProfile& b, double tau, double y_lo,
                     double y_hi, std::size_t n);

/// The four profiles attached to a fan, computed concurrently.
struct FanProfiles {
  SuperposedProfile incoming;
  SuperposedProfile outgoing;
};
FanProfiles compute_fan_profiles(const WaveFan& fan, double a, const ProfileOptions& options = {});

}  // namespace nsac

#endif

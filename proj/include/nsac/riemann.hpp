#ifndef NSAC_RIEMANN_HPP
#define NSAC_RIEMANN_HPP

#include <string>

#include "nsac/model.hpp"

namespace nsac {

enum class Family : int { one = 1, two = 2 };
enum class Side { left, right };

inline int index_of(Family f) noexcept { return static_cast<int>(f) - 1; }

/// A Lax shock of the p-system. The speed is in the frame of the states'
/// tag: mass-coordinate speed for Lagrangian states, dx/dt for Eulerian ones.
struct ShockWave {
  Family family;
  State left;
  State right;
  double speed;
};

/// max-norm of -s (U_r - U_l) + F(U_r) - F(U_l), Lagrangian variables.
double rh_residual(const GasLaw& law, const ShockWave& w);

/// Strict Lax ordering for the wave's family, with an absolute margin:
/// family 1: lambda1(right) + m < s < lambda1(left) - m < 0,
/// family 2: 0 < lambda2(right) + m < s < lambda2(left) - m.
bool satisfies_lax(const GasLaw& law, const ShockWave& w, double margin = 0.0);

/// Shock of the given family through `anchor` whose other state has volume
/// v_target. `anchor_side` says whether the anchor is the left or the right
/// state of the shock. Throws AdmissibilityError when the resulting shock
/// violates the Lax condition, or when v_target == anchor.v().
ShockWave hugoniot_locus(const GasLaw& law, const State& anchor, Family family,
                         double v_target, Side anchor_side);

/// Same, with the anchor taken as the unshocked state the wave runs into:
/// the left state of a 1-shock, the right state of a 2-shock.
ShockWave hugoniot_locus(const GasLaw& law, const State& anchor, Family family,
                         double v_target);

struct Strengths {
  double incoming1 = 0.0;  // |U+ - U*|
  double incoming2 = 0.0;  // |U* - U-|
  double outgoing1 = 0.0;  // |U~* - U-|
  double outgoing2 = 0.0;  // |U+ - U~*|
  double min_incoming = 0.0;
};

/// Entropy solution of two colliding shocks: a 2-shock U- -> U* starting at
/// x_left and a 1-shock U* -> U+ starting at x_right, meeting at (x0, t0) and
/// leaving a 1-shock U- -> U~* and a 2-shock U~* -> U+.
struct WaveFan {
  GasLaw law{1.4};
  Frame frame = Frame::lagrangian;  // frame of the speeds, positions and states

  State minus = State::lagrangian(1.0, 0.0);
  State star = State::lagrangian(1.0, 0.0);
  State plus = State::lagrangian(1.0, 0.0);
  double s1 = 0.0;  // incoming 1-shock, < 0 in the Lagrangian frame
  double s2 = 0.0;  // incoming 2-shock, > 0 in the Lagrangian frame

  double x_left = 0.0;
  double x_right = 1.0;
  double x0 = 0.0;
  double t0 = 0.0;

  State post_star = State::lagrangian(1.0, 0.0);
  double post_s1 = 0.0;
  double post_s2 = 0.0;

  Strengths strengths;

  ShockWave incoming_1() const { return {Family::one, star, plus, s1}; }
  ShockWave incoming_2() const { return {Family::two, minus, star, s2}; }
  ShockWave outgoing_1() const { return {Family::one, minus, post_star, post_s1}; }
  ShockWave outgoing_2() const { return {Family::two, post_star, plus, post_s2}; }
};

struct PostInteraction {
  State star;
  double s1;
  double s2;
};

/// Intersection of the two incoming shock lines x_left + s2 t and x_right + s1 t.
struct InteractionPoint {
  double x0;
  double t0;
};
InteractionPoint interaction_point(double s1, double s2, double x_left = 0.0, double x_right = 1.0);

/// Solves for U* between a 2-shock leaving U- and a 1-shock arriving at U+,
/// then completes the fan with the post-interaction states and strengths.
/// Inputs are interpreted in the Lagrangian frame.
WaveFan solve_two_shock(const GasLaw& law, const State& u_minus, const State& u_plus,
                        double x_left = 0.0, double x_right = 1.0);

/// Outgoing 1-shock U- -> U~* and 2-shock U~* -> U+.
PostInteraction solve_post_interaction(const GasLaw& law, const State& u_minus, const State& u_plus);

Strengths wave_strengths(const WaveFan& fan);

/// Piecewise-constant entropy solution; points on a wave line get the left state.
State evaluate_entropy_solution(const WaveFan& fan, double x, double t);

/// Same fan with dx/dt speeds: S = u + s v on either side of each shock.
/// Positions x_left/x_right are kept and x0, t0 recomputed.
WaveFan to_eulerian(const WaveFan& fan);

// ---- classical Riemann problem -------------------------------------------

enum class WaveKind { shock, rarefaction };

struct Wave {
  Family family;
  WaveKind kind;
  State left;
  State right;
  double slowest;  // smallest x/t covered by the wave
  double fastest;  // largest x/t; equals slowest for a shock
};

class RiemannSolution {
 public:
  RiemannSolution(GasLaw law, Frame frame, State left, State middle, State right, Wave w1, Wave w2)
      : law_(law), frame_(frame), left_(left), middle_(middle), right_(right), w1_(w1), w2_(w2) {}

  const GasLaw& law() const noexcept { return law_; }
  Frame frame() const noexcept { return frame_; }
  const State& left() const noexcept { return left_; }
  const State& middle() const noexcept { return middle_; }
  const State& right() const noexcept { return right_; }
  const Wave& wave(Family f) const noexcept { return f == Family::one ? w1_ : w2_; }

  /// Self-similar solution at xi = x/t; shock lines take the left state.
  State sample(double xi) const;

 private:
  GasLaw law_;
  Frame frame_;
  State left_, middle_, right_;
  Wave w1_, w2_;
};

/// Lax shocks or rarefactions in each family, middle state from the
/// intersection of the forward 1-curve and the backward 2-curve. The frame of
/// `left` decides the frame of the returned speeds and states. Throws
/// AdmissibilityError on vacuum formation.
RiemannSolution solve_riemann_general(const GasLaw& law, const State& left, const State& right);

/// u - (+-) integral of sqrt(-p') ; psi(v) = 2 sqrt(gamma)/(gamma-1) v^(-(gamma-1)/2).
double riemann_potential(const GasLaw& law, double v);

std::string to_string(Family f);
std::string to_string(WaveKind k);

}  // namespace nsac

#endif

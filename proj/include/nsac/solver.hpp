#ifndef NSAC_SOLVER_HPP
#define NSAC_SOLVER_HPP

#include <string>
#include <vector>

#include "nsac/model.hpp"

namespace nsac {

enum class Boundary { outflow };
enum class Limiter { minmod };

struct SolverConfig {
  double gamma = 1.4;
  double eps = 4e-4;         // interface thickness = relaxation time; capillary eps^2; mobility c_L/eps
  double a = 0.0;            // relaxation speed; <= 0 selects it from the initial data
  double a_margin = 1.2;     // factor used when a is selected automatically
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_cells = 1000;
  double cfl = 0.5;
  double t_end = 0.2;
  std::vector<double> out_times;  // empty: t_end only
  double mobility_const = 1.0;
  double stabilizer = 2.0;
  Boundary boundary = Boundary::outflow;
  int order = 2;
  Limiter limiter = Limiter::minmod;
  std::string preset;
  std::vector<double> markers;  // positions advected with dX/dt = u every step (diagnostic)

  double dx() const noexcept { return (x_hi - x_lo) / n_cells; }
};

/// Throws ConfigError on any violated field constraint.
void validate(const SolverConfig& config);

/// Cell-wise primitive data used to start a run.
struct InitialData {
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> chi;
};

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> x;    // cell centers
  std::vector<double> rho;
  std::vector<double> m;    // momentum rho u
  std::vector<double> chi;
  std::vector<Vec2> v_aux;  // relaxation variables (mass flux, momentum flux)

  std::size_t size() const noexcept { return x.size(); }
  std::vector<double> velocity() const;
};

/// Named experiment: configuration plus its initial data on the config's grid.
struct Preset {
  SolverConfig config;
  InitialData initial;
};

/// "fig1" (single jump, phase interface at the jump) or "two_wave" (two jumps,
/// interface between them). Throws ConfigError for an unknown name.
Preset make_preset(const std::string& name);

/// Initial data of a named preset on an arbitrary grid of `config`.
InitialData preset_initial_data(const std::string& name, const SolverConfig& config);

std::vector<std::string> preset_names();

/// 1.2-style automatic relaxation speed: margin * max(|u| + c) over the
/// initial cells, the middle states of the Riemann problems between adjacent
/// differing cells, and the middle states of the problems those middle
/// states pose among themselves.
double auto_relaxation_speed(const SolverConfig& config, const InitialData& initial);

/// Cell centers, m = rho u, V = F(U). Throws DomainError naming the first
/// cell with non-positive density or |chi| > 1.
FieldSnapshot initialize(const SolverConfig& config, const InitialData& initial);

/// mu = (chi^3 - chi) - (eps^2 / rho) chi_xx, zero-gradient ends.
std::vector<double> chemical_potential(const FieldSnapshot& state, const SolverConfig& config);

struct StepReport {
  double dt = 0.0;
  double chi_overshoot = 0.0;     // max(|chi| - 1, 0) before clamping
  double max_wave_speed = 0.0;    // max(|u| + c) after the step
  double boundary_mass = 0.0;     // inflow through both ends during the step
  double boundary_momentum = 0.0;
};

/// One step of the split scheme: relaxation transport (characteristic
/// upwinding of V +- aU, MUSCL-minmod with SSP-RK2 at order 2), exact
/// relaxation of V toward F(U), capillary momentum flux, stabilized
/// semi-implicit Allen-Cahn, clamp of chi to [-1, 1]. `a` must be resolved
/// (> 0); dt <= 0 selects cfl * dx / a. Throws NumericalError on density loss
/// or when max(|u| + c) reaches a.
FieldSnapshot step(const FieldSnapshot& state, const SolverConfig& config, double dt = 0.0,
                   StepReport* report = nullptr);

struct ConservationLedger {
  double t = 0.0;
  double mass0 = 0.0, momentum0 = 0.0;
  double mass = 0.0, momentum = 0.0;
  double inflow_mass = 0.0, inflow_momentum = 0.0;  // accumulated boundary fluxes

  /// |mass - mass0 - inflow| / mass0.
  double mass_defect() const noexcept;
  /// |momentum - momentum0 - inflow| / (mass0 * a_scale), a momentum scale.
  double momentum_defect(double a_scale) const noexcept;
};

struct RunResult {
  SolverConfig config;  // with `a` resolved
  std::vector<FieldSnapshot> snapshots;  // initial state first, then each output time
  std::vector<ConservationLedger> ledgers;  // one per snapshot
  long steps = 0;
  double max_chi_overshoot = 0.0;
  double max_wave_speed = 0.0;
  std::vector<std::vector<double>> marker_positions;  // per snapshot, config.markers advected
  double effective_viscosity = 0.0;  // eps (a^2 - max(|u|+c)^2), relaxation viscosity scale
  double wall_seconds = 0.0;
};

/// Output times are config.out_times (sorted, within (0, t_end]) or t_end;
/// the last step before each lands exactly on it.
RunResult run(const SolverConfig& config, const InitialData& initial);

}  // namespace nsac

#endif

#ifndef NSAC_HARNESS_HPP
#define NSAC_HARNESS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsac/riemann.hpp"
#include "nsac/solver.hpp"

namespace nsac {

/// Centered Riemann problems at increasing jump positions, exact while their
/// fans do not overlap.
struct RiemannChain {
  std::vector<RiemannSolution> problems;  // Eulerian
  std::vector<double> jumps;

  /// Builds the chain for piecewise-constant Eulerian data.
  static RiemannChain from_states(const GasLaw& law, const std::vector<State>& states,
                                  const std::vector<double>& jumps);
  /// Earliest time at which two neighbouring fans touch (infinity if never).
  double overlap_time() const;
};

/// Exact solution used as the comparison target: a two-shock fan (converted
/// to the Eulerian frame) or a chain of centered Riemann problems.
class Reference {
 public:
  explicit Reference(const WaveFan& fan);
  explicit Reference(RiemannChain chain);

  const std::variant<WaveFan, RiemannChain>& data() const noexcept { return data_; }
  /// Eulerian state at (x, t). Throws DomainError past the validity of a chain.
  State at(double x, double t) const;

  /// x-intervals [lo, hi] covered by waves at time t (a shock is a point).
  std::vector<std::pair<double, double>> wave_intervals(double t) const;

  /// Predicted position of the shock of `family`; for a fan this is the
  /// incoming shock before t0 and the outgoing one after. For a chain the
  /// first problem with a shock in that family is used unless `index` says otherwise.
  double shock_position(Family family, double t, std::size_t index = npos) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::variant<WaveFan, RiemannChain> data_;
};

/// Exact reference for a solver preset: the chain of Riemann problems posed by
/// its piecewise-constant (rho, u) data.
Reference reference_for_preset(const std::string& name, double gamma = 1.4);

enum class Epoch { before, after };

struct RegionSpec {
  double h = 0.05;
  Epoch epoch = Epoch::before;
  Reference reference;
  double t = 0.0;
  bool mask_interface = true;  // also exclude |x - interface| < h for chi
};

/// Validates h > 0 and, for a fan, t <= t0 - h (before) or t >= t0 + h (after).
void validate(const RegionSpec& region);

struct ErrorReport {
  double eps = 0.0;
  double sup_rho = 0.0;
  double sup_u = 0.0;
  double sup_chi = 0.0;  // max |chi^2 - 1|
  std::size_t cells_used = 0;      // for rho and u
  std::size_t cells_used_chi = 0;  // additionally outside the interface mask
};

/// Sup-norm errors on the cells farther than h from every wave (and, for
/// chi, from every sign change of chi). Throws DomainError when no cell is
/// left or when |snapshot.t - region.t| exceeds time_tolerance.
ErrorReport sigma_h_error(const FieldSnapshot& snapshot, const RegionSpec& region,
                          double time_tolerance = 1e-9);

struct SweepEntry {
  double eps = 0.0;
  std::optional<ErrorReport> report;
  std::string error;  // non-empty when the run failed
  double wall_seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // in eps_list order
  bool rho_monotone = false;
  bool u_monotone = false;
  bool chi_monotone = false;  // with an absolute floor of 1e-10
  bool monotone = false;      // rho and u, all runs successful
};

/// Each error sequence may grow by at most `tolerance` (relative) from one
/// eps to the next; values below `floor` count as equal.
bool non_increasing(const std::vector<double>& values, double tolerance = 0.05, double floor = 0.0);

/// Runs the solver for every eps (strictly decreasing, positive) up to
/// region.t, concurrently on up to `workers` threads (0: hardware
/// concurrency), and compares each final snapshot with the region.
SweepResult epsilon_sweep(const SolverConfig& base, const InitialData& initial,
                          const std::vector<double>& eps_list, const RegionSpec& region,
                          unsigned workers = 0);

struct TrackedShock {
  double position = 0.0;
  double peak_gradient = 0.0;  // |drho/dx| at the peak
  double background = 0.0;     // median |drho/dx| in the window
};

/// Steepest density gradient within +-window of the predicted line of the
/// shock, refined by a parabola through the peak. window <= 0: 20 cells.
/// Throws NumericalError when the peak is not above 3x the background.
TrackedShock shock_tracking(const FieldSnapshot& snapshot, const Reference& reference, Family family,
                            double window = 0.0, std::size_t index = Reference::npos);

/// Finite-difference speed of a tracked shock between two snapshots.
double tracked_shock_speed(const FieldSnapshot& a, const FieldSnapshot& b, const Reference& reference,
                           Family family, double window = 0.0, std::size_t index = Reference::npos);

/// Compressive fronts found without a reference: maximal runs of faces with
/// u_{i+1} - u_i < -min_face_drop whose total velocity drop exceeds min_drop.
struct DetectedShock {
  double position = 0.0;  // steepest face in the run
  Family family = Family::one;  // 2 if density falls across it, 1 if it rises
  double velocity_drop = 0.0;
};
std::vector<DetectedShock> detect_shocks(const FieldSnapshot& snapshot, double min_drop = 0.1,
                                         double min_face_drop = 0.01);

/// Linear zero crossing of chi. Throws DomainError unless chi changes sign exactly once.
double interface_tracking(const FieldSnapshot& snapshot);

/// Position at the last snapshot of a marker started at x_start at the first
/// one, advected by dX/dt = u(X, t) (Heun steps, linear interpolation in x
/// and t between consecutive snapshots, `substeps` per snapshot interval).
double advect_marker(const std::vector<FieldSnapshot>& snapshots, double x_start, int substeps = 20);

}  // namespace nsac

#endif

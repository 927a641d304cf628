#ifndef NSAC_IO_HPP
#define NSAC_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nsac/harness.hpp"
#include "nsac/profiles.hpp"
#include "nsac/solver.hpp"

namespace nsac {

/// 17 significant digits, locale independent.
std::string format_number(double x);

/// Parses a whole string as a decimal or scientific number; ConfigError otherwise.
double parse_number(const std::string& text, const std::string& what);
/// Comma-separated numbers, e.g. "0.08,0.4".
std::vector<double> parse_number_list(const std::string& text, const std::string& what);

// ---- key-value text ---------------------------------------------------------

/// `key = value` lines; '#' starts a comment, blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;

/// Throws ConfigError naming `source` and the line on malformed or duplicate keys.
KeyValues parse_key_values(std::istream& in, const std::string& source);
/// Throws IoError when the file cannot be read.
KeyValues read_key_values(const std::filesystem::path& path);

/// Applies the recognised solver keys (gamma, eps, a, a_margin, x_lo, x_hi,
/// n_cells, dx, cfl, t_end, out_times, mobility_const, stabilizer, order,
/// preset, markers) and returns the keys it did not use. `dx` is applied after
/// the domain keys and must divide the domain into a whole number of cells.
std::vector<std::string> apply_solver_config(SolverConfig& config, const KeyValues& kv);

/// Echo of every solver field as key-value text (parseable by apply_solver_config).
void write_solver_config(std::ostream& out, const SolverConfig& config);

// ---- snapshots and runs -------------------------------------------------------

/// "<run>_t<time>.csv" with the time in shortest %g form.
std::string snapshot_filename(const std::string& run, double t);

/// Header `x,rho,u,chi`, one row per cell.
void write_snapshot_csv(std::ostream& out, const FieldSnapshot& snapshot);
void write_snapshot_csv(const std::filesystem::path& path, const FieldSnapshot& snapshot);

/// Inverse of write_snapshot_csv (auxiliary variables are left at zero).
/// Throws IoError naming the file on a wrong header or a malformed row.
FieldSnapshot read_snapshot_csv(const std::filesystem::path& path, double t = 0.0);

/// Config echo, per-output conservation ledger, step count, diagnostics, wall time.
void write_run_meta(std::ostream& out, const std::string& run, const RunResult& result);

/// Writes one CSV per output time (the initial state is not an output) and
/// `<run>_meta.txt` into `dir`, creating it. Returns the written paths.
std::vector<std::filesystem::path> write_run(const std::filesystem::path& dir, const std::string& run,
                                             const RunResult& result);

// ---- waves -------------------------------------------------------------------

/// Structured key-value text: law, frame, states, speeds, interaction point
/// and strengths.
void write_fan(std::ostream& out, const WaveFan& fan);
WaveFan read_fan(std::istream& in, const std::string& source);

void write_riemann(std::ostream& out, const RiemannSolution& solution);

/// Header `xi,v,u,lambda_family`; lambda_family is the characteristic speed
/// of the profile's family at each sample.
void write_profile_csv(std::ostream& out, const ShockProfile& profile);

// ---- sweeps -------------------------------------------------------------------

/// Header `eps,sup_rho,sup_u,sup_chi,cells_used,cells_used_chi,wall_seconds,status`.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Verdicts and region parameters as key-value text.
void write_sweep_summary(std::ostream& out, const SweepResult& result, const RegionSpec& region);

}  // namespace nsac

#endif

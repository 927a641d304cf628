// Command-line front end. Uses only the C interface.
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsac/nsac.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;  // i/o and internal failures
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(nsac_status s) {
  switch (s) {
    case NSAC_OK: return kExitOk;
    case NSAC_ERR_INVALID_ARGUMENT:
    case NSAC_ERR_DOMAIN:
    case NSAC_ERR_ADMISSIBILITY:
    case NSAC_ERR_CONFIG: return kExitValidation;
    case NSAC_ERR_NUMERICAL: return kExitNumerical;
    default: return kExitOther;
  }
}

void check(nsac_status s) {
  if (s != NSAC_OK) throw Failure{exit_code(s), std::string(nsac_status_name(s)) + ": " + nsac_last_error()};
}

[[noreturn]] void invalid(const std::string& what) { throw Failure{kExitValidation, what}; }

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(p); }
};

using Settings = Handle<nsac_settings, nsac_settings_destroy>;

double number(const std::string& text, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || errno == ERANGE || *end != '\0') invalid(what + ": not a number: '" + text + "'");
  return v;
}

std::vector<double> numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(number(text.substr(start, comma - start), what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::pair<double, double> pair_of(const std::string& text, const std::string& what) {
  const auto v = numbers(text, what);
  if (v.size() != 2) invalid(what + ": expected two comma-separated numbers, got '" + text + "'");
  return {v[0], v[1]};
}

// Flags are recorded as strings so that they override entries of --config FILE.
struct Flags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }

  void merge_into(nsac_settings* s) const {
    if (!config_file.empty()) check(nsac_settings_load_file(s, config_file.c_str(), 1));
    for (const auto& [k, v] : values) check(nsac_settings_set(s, k.c_str(), v.c_str()));
  }
};

std::string get(const nsac_settings* s, const std::string& key, const std::string& fallback = {}) {
  const char* v = nullptr;
  check(nsac_settings_get(s, key.c_str(), &v));
  return v ? std::string(v) : fallback;
}

std::string require(const nsac_settings* s, const std::string& key, const std::string& flag) {
  const std::string v = get(s, key);
  if (v.empty()) invalid("missing " + flag + " (or '" + key + "' in the config file)");
  return v;
}

void reject_unknown(const nsac_settings* s, const std::vector<std::string>& known) {
  std::size_t n = 0;
  check(nsac_settings_size(s, &n));
  for (std::size_t k = 0; k < n; ++k) {
    const char* key = nullptr;
    check(nsac_settings_key(s, k, &key));
    bool ok = false;
    for (const std::string& name : known) ok = ok || name == key;
    if (!ok) invalid(std::string("unknown configuration key '") + key + "'");
  }
}

FILE* open_output(const std::string& path) {
  if (path.empty() || path == "-") return stdout;
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Failure{kExitOther, "cannot open '" + path + "' for writing"};
  return f;
}

void finish_output(FILE* f, const std::string& path) {
  if (f == stdout) return;
  if (std::fclose(f) != 0) throw Failure{kExitOther, "write to '" + path + "' failed"};
}

// ---- subcommands --------------------------------------------------------------

void cmd_riemann(const Flags& flags) {
  Settings s;
  check(nsac_settings_create(&s.p));
  flags.merge_into(s.p);
  reject_unknown(s.p, {"gamma", "left", "right", "mode", "x_left", "x_right", "out"});
  const double gamma = number(get(s.p, "gamma", "1.4"), "--gamma");
  const auto [vl, ul] = pair_of(require(s.p, "left", "--left"), "--left");
  const auto [vr, ur] = pair_of(require(s.p, "right", "--right"), "--right");
  const std::string mode = get(s.p, "mode", "two-shock");
  const std::string out = get(s.p, "out");
  const char* text = nullptr;
  Handle<nsac_fan, nsac_fan_destroy> fan;
  if (mode == "two-shock") {
    const double xl = number(get(s.p, "x_left", "0"), "--x-left");
    const double xr = number(get(s.p, "x_right", "1"), "--x-right");
    check(nsac_fan_solve(gamma, vl, ul, vr, ur, xl, xr, &fan.p));
    check(nsac_fan_text(fan.p, &text));
  } else if (mode == "general") {
    check(nsac_riemann_text(gamma, vl, ul, vr, ur, &text));
  } else {
    invalid("mode must be 'two-shock' or 'general'");
  }
  FILE* f = open_output(out);
  std::fputs(text, f);
  finish_output(f, out);
}

void cmd_profile(const Flags& flags) {
  Settings s;
  check(nsac_settings_create(&s.p));
  flags.merge_into(s.p);
  reject_unknown(s.p, {"gamma", "family", "left", "vright", "a", "out"});
  const double gamma = number(get(s.p, "gamma", "1.4"), "--gamma");
  const double fam = number(require(s.p, "family", "--family"), "--family");
  if (fam != 1.0 && fam != 2.0) invalid("--family must be 1 or 2");
  const auto [vl, ul] = pair_of(require(s.p, "left", "--left"), "--left");
  const double vr = number(require(s.p, "vright", "--vright"), "--vright");
  const double a = number(require(s.p, "a", "--a"), "--a");
  const std::string out = require(s.p, "out", "--out");
  Handle<nsac_profile, nsac_profile_destroy> p;
  check(nsac_profile_compute(gamma, static_cast<int>(fam), vl, ul, vr, a, &p.p));
  check(nsac_profile_write_csv(p.p, out.c_str()));
  std::size_t n = 0;
  double speed = 0.0;
  check(nsac_profile_size(p.p, &n));
  check(nsac_profile_speed(p.p, &speed));
  std::printf("profile: family %d, speed %.17g, %zu samples -> %s\n", static_cast<int>(fam), speed, n, out.c_str());
}

Handle<nsac_config, nsac_config_destroy>* configure(const nsac_settings* s, const std::vector<const char*>& own_keys) {
  auto* c = new Handle<nsac_config, nsac_config_destroy>;
  try {
    const std::string preset = require(s, "preset", "--preset");
    check(nsac_config_preset(preset.c_str(), &c->p));
    check(nsac_config_apply(c->p, s, own_keys.data(), own_keys.size()));
  } catch (...) {
    delete c;
    throw;
  }
  return c;
}

void cmd_simulate(const Flags& flags) {
  Settings s;
  check(nsac_settings_create(&s.p));
  flags.merge_into(s.p);
  std::unique_ptr<Handle<nsac_config, nsac_config_destroy>> cfg(configure(s.p, {"outdir", "name"}));
  const std::string outdir = get(s.p, "outdir", ".");
  const std::string name = get(s.p, "name", get(s.p, "preset"));
  Handle<nsac_run, nsac_run_destroy> run;
  check(nsac_run_execute(cfg->p, &run.p));
  check(nsac_run_write(run.p, outdir.c_str(), name.c_str()));
  nsac_run_info info{};
  check(nsac_run_info_get(run.p, &info));
  std::printf("simulate %s: %ld steps, a = %.6g, %zu outputs, mass defect %.3g, momentum defect %.3g, "
              "chi overshoot %.3g, %.2f s -> %s\n",
              name.c_str(), info.steps, info.a, info.snapshots - 1, info.max_mass_defect, info.max_momentum_defect,
              info.max_chi_overshoot, info.wall_seconds, outdir.c_str());
}

int cmd_sweep(const Flags& flags) {
  Settings s;
  check(nsac_settings_create(&s.p));
  flags.merge_into(s.p);
  std::unique_ptr<Handle<nsac_config, nsac_config_destroy>> cfg(
      configure(s.p, {"outdir", "name", "eps_list", "h", "t", "workers"}));
  const std::vector<double> eps = numbers(require(s.p, "eps_list", "--eps-list"), "--eps-list");
  const double h = number(require(s.p, "h", "--h"), "--h");
  const double t = number(require(s.p, "t", "--t"), "--t");
  const double workers = number(get(s.p, "workers", "0"), "--workers");
  if (workers < 0 || workers != static_cast<unsigned>(workers)) invalid("--workers must be a non-negative integer");
  const std::string outdir = get(s.p, "outdir", ".");
  const std::string name = get(s.p, "name", get(s.p, "preset"));
  Handle<nsac_sweep, nsac_sweep_destroy> sw;
  check(nsac_sweep_execute(cfg->p, eps.data(), eps.size(), h, t, static_cast<unsigned>(workers), &sw.p));
  check(nsac_sweep_write(sw.p, outdir.c_str(), name.c_str()));
  std::size_t n = 0;
  check(nsac_sweep_size(sw.p, &n));
  bool failed = false;
  std::printf("%-12s %-14s %-14s %-14s %s\n", "eps", "sup_rho", "sup_u", "sup_chi", "cells");
  for (std::size_t k = 0; k < n; ++k) {
    nsac_sweep_entry e{};
    check(nsac_sweep_entry_get(sw.p, k, &e));
    if (e.ok) {
      std::printf("%-12.6g %-14.6g %-14.6g %-14.6g %zu\n", e.eps, e.sup_rho, e.sup_u, e.sup_chi, e.cells_used);
    } else {
      const char* msg = nullptr;
      check(nsac_sweep_entry_error(sw.p, k, &msg));
      std::printf("%-12.6g failed: %s\n", e.eps, msg);
      failed = true;
    }
  }
  int monotone = 0;
  check(nsac_sweep_monotone(sw.p, &monotone));
  std::printf("verdict: %s\n", monotone ? "monotone" : "not monotone");
  return failed ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsac: shock interaction in compressible two-phase flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nsac_version()));

  Flags riemann, profile, simulate, sweep;

  auto* r = app.add_subcommand("riemann", "two-shock interaction fan or general Riemann problem (Lagrangian states)");
  r->add_option("--config", riemann.config_file, "key-value file; flags override its entries");
  riemann.add(r, "--gamma", "gamma", "adiabatic exponent (default 1.4)");
  riemann.add(r, "--left", "left", "left state v,u");
  riemann.add(r, "--right", "right", "right state v,u");
  riemann.add(r, "--x-left", "x_left", "position of the left jump (default 0)");
  riemann.add(r, "--x-right", "x_right", "position of the right jump (default 1)");
  riemann.add(r, "--out", "out", "output file (default stdout)");
  auto* two = r->add_flag_callback("--two-shock", [&] { riemann.values["mode"] = "two-shock"; },
                                   "colliding 2-shock and 1-shock (default)");
  auto* gen = r->add_flag_callback("--general", [&] { riemann.values["mode"] = "general"; },
                                   "classical Riemann problem with shocks or rarefactions");
  two->excludes(gen);

  auto* p = app.add_subcommand("profile", "traveling-wave profile of one shock");
  p->add_option("--config", profile.config_file, "key-value file; flags override its entries");
  profile.add(p, "--gamma", "gamma", "adiabatic exponent (default 1.4)");
  profile.add(p, "--family", "family", "shock family, 1 or 2");
  profile.add(p, "--left", "left", "left state v,u");
  profile.add(p, "--vright", "vright", "right volume");
  profile.add(p, "--a", "a", "relaxation speed");
  profile.add(p, "--out", "out", "CSV file with columns xi,v,u,lambda_family");

  auto* sim = app.add_subcommand("simulate", "run a preset experiment and write snapshots");
  sim->add_option("--config", simulate.config_file, "key-value file; flags override its entries");
  simulate.add(sim, "--preset", "preset", "fig1 or two_wave");
  simulate.add(sim, "--eps", "eps", "interface thickness and relaxation time");
  simulate.add(sim, "--dx", "dx", "cell width");
  simulate.add(sim, "--cfl", "cfl", "CFL number");
  simulate.add(sim, "--t-end", "t_end", "final time");
  simulate.add(sim, "--out-times", "out_times", "comma-separated output times");
  simulate.add(sim, "--order", "order", "1 or 2");
  simulate.add(sim, "--outdir", "outdir", "output directory (default .)");
  simulate.add(sim, "--name", "name", "run name used in file names (default: the preset)");

  auto* sw = app.add_subcommand("sweep", "epsilon convergence study against the exact solution");
  sw->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  sw->add_option("--config", sweep.config_file, "key-value file; flags override its entries");
  sweep.add(sw, "--preset", "preset", "fig1 or two_wave");
  sweep.add(sw, "--eps-list", "eps_list", "strictly decreasing comma-separated eps values");
  sweep.add(sw, "--h", "h", "half-width of the excluded wave neighbourhoods");
  sweep.add(sw, "--t", "t", "comparison time");
  sweep.add(sw, "--dx", "dx", "cell width");
  sweep.add(sw, "--workers", "workers", "concurrent runs (default: all cores)");
  sweep.add(sw, "--outdir", "outdir", "output directory (default .)");
  sweep.add(sw, "--name", "name", "report name (default: the preset)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (r->parsed()) cmd_riemann(riemann);
    else if (p->parsed()) cmd_profile(profile);
    else if (sim->parsed()) cmd_simulate(simulate);
    else if (sw->parsed()) return cmd_sweep(sweep);
  } catch (const Failure& f) {
    std::fprintf(stderr, "nsac: %s\n", f.message.c_str());
    return f.code;
  }
  return kExitOk;
}

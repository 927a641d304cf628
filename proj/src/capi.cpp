#include "nsac/nsac.h"

#include <algorithm>
#include <fstream>
#include <filesystem>
#include <iterator>
#include <memory>
#include <new>
#include <set>
#include <sstream>
#include <string>

#include "nsac/io.hpp"

struct nsac_settings {
  nsac::KeyValues values;
};

struct nsac_fan {
  nsac::WaveFan fan;
  std::string text;
};

struct nsac_profile {
  nsac::ShockProfile profile;
};

struct nsac_config {
  nsac::SolverConfig config;
  nsac::InitialData initial;
  std::string text;
};

struct nsac_run {
  nsac::RunResult result;
};

struct nsac_sweep {
  nsac::SweepResult result;
  nsac::RegionSpec region;
};

namespace {

thread_local std::string last_error;
thread_local std::string scratch_text;

nsac_status fail(nsac_status s, const std::string& what) {
  last_error = what;
  return s;
}

nsac_status status_of(nsac::ErrorKind k) {
  switch (k) {
    case nsac::ErrorKind::domain: return NSAC_ERR_DOMAIN;
    case nsac::ErrorKind::admissibility: return NSAC_ERR_ADMISSIBILITY;
    case nsac::ErrorKind::config: return NSAC_ERR_CONFIG;
    case nsac::ErrorKind::numerical: return NSAC_ERR_NUMERICAL;
    case nsac::ErrorKind::io: return NSAC_ERR_IO;
  }
  return NSAC_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes.
template <class F>
nsac_status guarded(F&& f) {
  try {
    f();
    return NSAC_OK;
  } catch (const nsac::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NSAC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NSAC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NSAC_ERR_INTERNAL, "unknown exception");
  }
}

#define NSAC_REQUIRE(cond, msg) \
  if (!(cond)) return fail(NSAC_ERR_INVALID_ARGUMENT, msg)

nsac::Family family_of(int f) {
  if (f != 1 && f != 2) throw nsac::ConfigError("family must be 1 or 2");
  return f == 1 ? nsac::Family::one : nsac::Family::two;
}

bool same_grid(const nsac::SolverConfig& a, const nsac::SolverConfig& b) {
  return a.x_lo == b.x_lo && a.x_hi == b.x_hi && a.n_cells == b.n_cells;
}

}  // namespace

extern "C" {

NSAC_API const char* nsac_last_error(void) { return last_error.c_str(); }

NSAC_API const char* nsac_status_name(nsac_status s) {
  switch (s) {
    case NSAC_OK: return "ok";
    case NSAC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NSAC_ERR_DOMAIN: return "domain error";
    case NSAC_ERR_ADMISSIBILITY: return "admissibility error";
    case NSAC_ERR_CONFIG: return "configuration error";
    case NSAC_ERR_NUMERICAL: return "numerical failure";
    case NSAC_ERR_IO: return "i/o error";
    case NSAC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

NSAC_API const char* nsac_version(void) { return "0.1.0"; }

// ---- settings ------------------------------------------------------------------

NSAC_API nsac_status nsac_settings_create(nsac_settings** out) {
  NSAC_REQUIRE(out, "nsac_settings_create: out is null");
  return guarded([&] { *out = new nsac_settings; });
}

NSAC_API void nsac_settings_destroy(nsac_settings* s) { delete s; }

NSAC_API nsac_status nsac_settings_load_file(nsac_settings* s, const char* path, int override_existing) {
  NSAC_REQUIRE(s && path, "nsac_settings_load_file: null argument");
  return guarded([&] {
    for (auto& [k, v] : nsac::read_key_values(path)) {
      if (override_existing) s->values[k] = v;
      else s->values.emplace(k, v);
    }
  });
}

NSAC_API nsac_status nsac_settings_set(nsac_settings* s, const char* key, const char* value) {
  NSAC_REQUIRE(s && key && value, "nsac_settings_set: null argument");
  NSAC_REQUIRE(*key, "nsac_settings_set: empty key");
  return guarded([&] { s->values[key] = value; });
}

NSAC_API nsac_status nsac_settings_get(const nsac_settings* s, const char* key, const char** value) {
  NSAC_REQUIRE(s && key && value, "nsac_settings_get: null argument");
  const auto it = s->values.find(key);
  *value = it == s->values.end() ? nullptr : it->second.c_str();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_settings_size(const nsac_settings* s, size_t* n) {
  NSAC_REQUIRE(s && n, "nsac_settings_size: null argument");
  *n = s->values.size();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_settings_key(const nsac_settings* s, size_t k, const char** key) {
  NSAC_REQUIRE(s && key, "nsac_settings_key: null argument");
  NSAC_REQUIRE(k < s->values.size(), "nsac_settings_key: index out of range");
  *key = std::next(s->values.begin(), static_cast<std::ptrdiff_t>(k))->first.c_str();
  return NSAC_OK;
}

// ---- fans and Riemann problems -----------------------------------------------------

NSAC_API nsac_status nsac_fan_solve(double gamma, double v_minus, double u_minus, double v_plus, double u_plus,
                                    double x_left, double x_right, nsac_fan** out) {
  NSAC_REQUIRE(out, "nsac_fan_solve: out is null");
  return guarded([&] {
    const nsac::GasLaw law(gamma);
    auto h = std::make_unique<nsac_fan>();
    h->fan = nsac::solve_two_shock(law, nsac::State::lagrangian(v_minus, u_minus),
                                   nsac::State::lagrangian(v_plus, u_plus), x_left, x_right);
    std::ostringstream os;
    nsac::write_fan(os, h->fan);
    h->text = os.str();
    *out = h.release();
  });
}

NSAC_API void nsac_fan_destroy(nsac_fan* f) { delete f; }

NSAC_API nsac_status nsac_fan_info_get(const nsac_fan* h, nsac_fan_info* info) {
  NSAC_REQUIRE(h && info, "nsac_fan_info_get: null argument");
  const nsac::WaveFan& f = h->fan;
  *info = {f.star.v(), f.star.u(), f.s1, f.s2, f.x0, f.t0, f.post_star.v(), f.post_star.u(), f.post_s1, f.post_s2,
           f.strengths.incoming1, f.strengths.incoming2, f.strengths.outgoing1, f.strengths.outgoing2};
  return NSAC_OK;
}

NSAC_API nsac_status nsac_fan_text(const nsac_fan* h, const char** text) {
  NSAC_REQUIRE(h && text, "nsac_fan_text: null argument");
  *text = h->text.c_str();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_riemann_text(double gamma, double v_left, double u_left, double v_right, double u_right,
                                       const char** text) {
  NSAC_REQUIRE(text, "nsac_riemann_text: text is null");
  return guarded([&] {
    const nsac::GasLaw law(gamma);
    std::ostringstream os;
    nsac::write_riemann(os, nsac::solve_riemann_general(law, nsac::State::lagrangian(v_left, u_left),
                                                        nsac::State::lagrangian(v_right, u_right)));
    scratch_text = os.str();
    *text = scratch_text.c_str();
  });
}

// ---- profiles -----------------------------------------------------------------------

NSAC_API nsac_status nsac_profile_compute(double gamma, int family, double v_left, double u_left, double v_right,
                                          double a, nsac_profile** out) {
  NSAC_REQUIRE(out, "nsac_profile_compute: out is null");
  NSAC_REQUIRE(family == 1 || family == 2, "nsac_profile_compute: family must be 1 or 2");
  return guarded([&] {
    const nsac::GasLaw law(gamma);
    const nsac::ShockWave w =
        nsac::hugoniot_locus(law, nsac::State::lagrangian(v_left, u_left), family_of(family), v_right, nsac::Side::left);
    *out = new nsac_profile{nsac::compute_profile(law, w, a)};
  });
}

NSAC_API void nsac_profile_destroy(nsac_profile* p) { delete p; }

NSAC_API nsac_status nsac_profile_size(const nsac_profile* p, size_t* n) {
  NSAC_REQUIRE(p && n, "nsac_profile_size: null argument");
  *n = p->profile.size();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_profile_sample(const nsac_profile* p, size_t k, double* xi, double* v, double* u,
                                         double* lambda) {
  NSAC_REQUIRE(p, "nsac_profile_sample: profile is null");
  NSAC_REQUIRE(k < p->profile.size(), "nsac_profile_sample: index out of range");
  const nsac::Vec2& w = p->profile.sample(k);
  if (xi) *xi = p->profile.xi(k) - p->profile.shift();
  if (v) *v = w[0];
  if (u) *u = w[1];
  if (lambda) {
    *lambda = nsac::eigenvalues(p->profile.law(), nsac::State::lagrangian(w[0], w[1]))[nsac::index_of(p->profile.family())];
  }
  return NSAC_OK;
}

NSAC_API nsac_status nsac_profile_speed(const nsac_profile* p, double* speed) {
  NSAC_REQUIRE(p && speed, "nsac_profile_speed: null argument");
  *speed = p->profile.speed();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_profile_write_csv(const nsac_profile* p, const char* path) {
  NSAC_REQUIRE(p && path, "nsac_profile_write_csv: null argument");
  return guarded([&] {
    std::ofstream f(path);
    if (!f) throw nsac::IoError(std::string("cannot open '") + path + "' for writing");
    nsac::write_profile_csv(f, p->profile);
    f.flush();
    if (!f) throw nsac::IoError(std::string("write to '") + path + "' failed");
  });
}

// ---- configuration and runs ---------------------------------------------------------------

NSAC_API nsac_status nsac_config_preset(const char* name, nsac_config** out) {
  NSAC_REQUIRE(name && out, "nsac_config_preset: null argument");
  return guarded([&] {
    nsac::Preset p = nsac::make_preset(name);
    *out = new nsac_config{std::move(p.config), std::move(p.initial), {}};
  });
}

NSAC_API void nsac_config_destroy(nsac_config* c) { delete c; }

NSAC_API nsac_status nsac_config_apply(nsac_config* c, const nsac_settings* s, const char* const* ignored,
                                       size_t n_ignored) {
  NSAC_REQUIRE(c && s, "nsac_config_apply: null argument");
  NSAC_REQUIRE(ignored || n_ignored == 0, "nsac_config_apply: ignored list is null");
  return guarded([&] {
    nsac::SolverConfig cfg = c->config;
    nsac::InitialData initial = c->initial;
    if (const auto it = s->values.find("preset"); it != s->values.end() && it->second != cfg.preset) {
      nsac::Preset p = nsac::make_preset(it->second);
      cfg = std::move(p.config);
      initial = std::move(p.initial);
    }
    const nsac::SolverConfig before = cfg;
    const auto unused = nsac::apply_solver_config(cfg, s->values);
    const std::set<std::string> allowed(ignored, ignored + n_ignored);
    for (const std::string& key : unused) {
      if (!allowed.count(key)) throw nsac::ConfigError("unknown configuration key '" + key + "'");
    }
    // a t_end change without explicit output times keeps a single output at the new end
    if (cfg.t_end != before.t_end && !s->values.count("out_times")) cfg.out_times = {cfg.t_end};
    nsac::validate(cfg);
    if (!same_grid(cfg, before)) {
      if (cfg.preset.empty()) throw nsac::ConfigError("grid changed but no preset is set to resample the initial data");
      initial = nsac::preset_initial_data(cfg.preset, cfg);
    }
    c->config = std::move(cfg);
    c->initial = std::move(initial);
  });
}

NSAC_API nsac_status nsac_config_text(nsac_config* c, const char** text) {
  NSAC_REQUIRE(c && text, "nsac_config_text: null argument");
  return guarded([&] {
    std::ostringstream os;
    nsac::write_solver_config(os, c->config);
    c->text = os.str();
    *text = c->text.c_str();
  });
}

NSAC_API nsac_status nsac_run_execute(const nsac_config* c, nsac_run** out) {
  NSAC_REQUIRE(c && out, "nsac_run_execute: null argument");
  return guarded([&] { *out = new nsac_run{nsac::run(c->config, c->initial)}; });
}

NSAC_API void nsac_run_destroy(nsac_run* r) { delete r; }

NSAC_API nsac_status nsac_run_info_get(const nsac_run* h, nsac_run_info* info) {
  NSAC_REQUIRE(h && info, "nsac_run_info_get: null argument");
  const nsac::RunResult& r = h->result;
  nsac_run_info i{};
  i.steps = r.steps;
  i.a = r.config.a;
  i.snapshots = r.snapshots.size();
  i.cells = static_cast<size_t>(r.config.n_cells);
  for (const auto& l : r.ledgers) {
    i.max_mass_defect = std::max(i.max_mass_defect, l.mass_defect());
    i.max_momentum_defect = std::max(i.max_momentum_defect, l.momentum_defect(r.config.a));
  }
  i.max_chi_overshoot = r.max_chi_overshoot;
  i.max_wave_speed = r.max_wave_speed;
  i.effective_viscosity = r.effective_viscosity;
  i.wall_seconds = r.wall_seconds;
  *info = i;
  return NSAC_OK;
}

NSAC_API nsac_status nsac_run_snapshot(const nsac_run* h, size_t k, double* t, double* x, double* rho, double* u,
                                       double* chi) {
  NSAC_REQUIRE(h, "nsac_run_snapshot: run is null");
  NSAC_REQUIRE(k < h->result.snapshots.size(), "nsac_run_snapshot: index out of range");
  const nsac::FieldSnapshot& s = h->result.snapshots[k];
  if (t) *t = s.t;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (x) x[i] = s.x[i];
    if (rho) rho[i] = s.rho[i];
    if (u) u[i] = s.m[i] / s.rho[i];
    if (chi) chi[i] = s.chi[i];
  }
  return NSAC_OK;
}

NSAC_API nsac_status nsac_run_write(const nsac_run* h, const char* dir, const char* name) {
  NSAC_REQUIRE(h && dir && name, "nsac_run_write: null argument");
  NSAC_REQUIRE(*name, "nsac_run_write: empty run name");
  return guarded([&] { nsac::write_run(dir, name, h->result); });
}

// ---- sweeps -----------------------------------------------------------------------------

NSAC_API nsac_status nsac_sweep_execute(const nsac_config* c, const double* eps, size_t n_eps, double h, double t,
                                        unsigned workers, nsac_sweep** out) {
  NSAC_REQUIRE(c && out, "nsac_sweep_execute: null argument");
  NSAC_REQUIRE(eps || n_eps == 0, "nsac_sweep_execute: eps is null");
  return guarded([&] {
    if (c->config.preset.empty()) throw nsac::ConfigError("sweep needs a preset for its exact reference");
    nsac::RegionSpec region{h, nsac::Epoch::before, nsac::reference_for_preset(c->config.preset, c->config.gamma), t,
                            true};
    const std::vector<double> list(eps, eps + n_eps);
    auto res = nsac::epsilon_sweep(c->config, c->initial, list, region, workers);
    *out = new nsac_sweep{std::move(res), std::move(region)};
  });
}

NSAC_API void nsac_sweep_destroy(nsac_sweep* s) { delete s; }

NSAC_API nsac_status nsac_sweep_size(const nsac_sweep* s, size_t* n) {
  NSAC_REQUIRE(s && n, "nsac_sweep_size: null argument");
  *n = s->result.entries.size();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_sweep_entry_get(const nsac_sweep* s, size_t k, nsac_sweep_entry* entry) {
  NSAC_REQUIRE(s && entry, "nsac_sweep_entry_get: null argument");
  NSAC_REQUIRE(k < s->result.entries.size(), "nsac_sweep_entry_get: index out of range");
  const nsac::SweepEntry& e = s->result.entries[k];
  nsac_sweep_entry out{};
  out.eps = e.eps;
  out.ok = e.report.has_value();
  if (e.report) {
    out.sup_rho = e.report->sup_rho;
    out.sup_u = e.report->sup_u;
    out.sup_chi = e.report->sup_chi;
    out.cells_used = e.report->cells_used;
    out.cells_used_chi = e.report->cells_used_chi;
  }
  out.wall_seconds = e.wall_seconds;
  *entry = out;
  return NSAC_OK;
}

NSAC_API nsac_status nsac_sweep_entry_error(const nsac_sweep* s, size_t k, const char** message) {
  NSAC_REQUIRE(s && message, "nsac_sweep_entry_error: null argument");
  NSAC_REQUIRE(k < s->result.entries.size(), "nsac_sweep_entry_error: index out of range");
  *message = s->result.entries[k].error.c_str();
  return NSAC_OK;
}

NSAC_API nsac_status nsac_sweep_monotone(const nsac_sweep* s, int* monotone) {
  NSAC_REQUIRE(s && monotone, "nsac_sweep_monotone: null argument");
  *monotone = s->result.monotone ? 1 : 0;
  return NSAC_OK;
}

NSAC_API nsac_status nsac_sweep_write(const nsac_sweep* s, const char* dir, const char* name) {
  NSAC_REQUIRE(s && dir && name, "nsac_sweep_write: null argument");
  return guarded([&] {
    const std::filesystem::path d(dir);
    std::error_code ec;
    std::filesystem::create_directories(d, ec);
    if (ec) throw nsac::IoError("cannot create directory '" + d.string() + "': " + ec.message());
    auto write = [](const std::filesystem::path& p, auto&& body) {
      std::ofstream f(p);
      if (!f) throw nsac::IoError("cannot open '" + p.string() + "' for writing");
      body(f);
      f.flush();
      if (!f) throw nsac::IoError("write to '" + p.string() + "' failed");
    };
    write(d / (std::string(name) + "_sweep.csv"), [&](std::ostream& f) { nsac::write_sweep_csv(f, s->result); });
    write(d / (std::string(name) + "_sweep_summary.txt"),
          [&](std::ostream& f) { nsac::write_sweep_summary(f, s->result, s->region); });
  });
}

}  // extern "C"

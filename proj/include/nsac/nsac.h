/* C interface to the nsac library. Every object is an opaque handle owned by
 * the caller and released with its *_destroy function. Functions return an
 * nsac_status; on failure nsac_last_error() describes the problem for the
 * calling thread until its next failing call. */
#ifndef NSAC_H
#define NSAC_H

#include <stddef.h>

#if defined(NSAC_BUILDING_LIBRARY)
#define NSAC_API __attribute__((visibility("default")))
#else
#define NSAC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nsac_status {
  NSAC_OK = 0,
  NSAC_ERR_INVALID_ARGUMENT = 1, /* null pointer, index out of range, bad enum */
  NSAC_ERR_DOMAIN = 2,           /* value outside the mathematical domain */
  NSAC_ERR_ADMISSIBILITY = 3,    /* data does not form the requested waves */
  NSAC_ERR_CONFIG = 4,           /* malformed or inconsistent configuration */
  NSAC_ERR_NUMERICAL = 5,        /* iteration failure, positivity loss, stability monitor */
  NSAC_ERR_IO = 6,
  NSAC_ERR_INTERNAL = 7
} nsac_status;

NSAC_API const char* nsac_last_error(void);
NSAC_API const char* nsac_status_name(nsac_status status);
NSAC_API const char* nsac_version(void);

/* ---- key-value settings ------------------------------------------------- */

typedef struct nsac_settings nsac_settings;

NSAC_API nsac_status nsac_settings_create(nsac_settings** out);
NSAC_API void nsac_settings_destroy(nsac_settings* settings);
/* Adds the entries of a key-value file. Keys already present are replaced
 * only when override_existing is non-zero. */
NSAC_API nsac_status nsac_settings_load_file(nsac_settings* settings, const char* path, int override_existing);
NSAC_API nsac_status nsac_settings_set(nsac_settings* settings, const char* key, const char* value);
/* *value is NULL when the key is absent; the string lives as long as the entry. */
NSAC_API nsac_status nsac_settings_get(const nsac_settings* settings, const char* key, const char** value);
/* Keys in sorted order: nsac_settings_key(settings, k, &key) for k < size. */
NSAC_API nsac_status nsac_settings_size(const nsac_settings* settings, size_t* n);
NSAC_API nsac_status nsac_settings_key(const nsac_settings* settings, size_t k, const char** key);

/* ---- two-shock interaction fan and Riemann problems ----------------------- */

typedef struct nsac_fan nsac_fan;

typedef struct nsac_fan_info {
  double v_star, u_star;
  double s1, s2;
  double x0, t0;
  double v_post, u_post;
  double post_s1, post_s2;
  double incoming1, incoming2, outgoing1, outgoing2;
} nsac_fan_info;

/* Lagrangian states U- = (v_minus, u_minus), U+ = (v_plus, u_plus); jumps at x_left < x_right. */
NSAC_API nsac_status nsac_fan_solve(double gamma, double v_minus, double u_minus, double v_plus, double u_plus,
                                    double x_left, double x_right, nsac_fan** out);
NSAC_API void nsac_fan_destroy(nsac_fan* fan);
NSAC_API nsac_status nsac_fan_info_get(const nsac_fan* fan, nsac_fan_info* info);
/* Structured key-value text with 17 significant digits, owned by the fan. */
NSAC_API nsac_status nsac_fan_text(const nsac_fan* fan, const char** text);

/* General Riemann problem (shocks or rarefactions), Lagrangian states.
 * The text is owned by the library until the next call on this thread. */
NSAC_API nsac_status nsac_riemann_text(double gamma, double v_left, double u_left, double v_right, double u_right,
                                       const char** text);

/* ---- traveling-wave profiles --------------------------------------------- */

typedef struct nsac_profile nsac_profile;

/* Shock of `family` (1 or 2) from the Lagrangian left state to the volume
 * v_right, profile of the relaxation system with speed a. */
NSAC_API nsac_status nsac_profile_compute(double gamma, int family, double v_left, double u_left, double v_right,
                                          double a, nsac_profile** out);
NSAC_API void nsac_profile_destroy(nsac_profile* profile);
NSAC_API nsac_status nsac_profile_size(const nsac_profile* profile, size_t* n);
/* Sample k: xi, v, u and the family's characteristic speed. */
NSAC_API nsac_status nsac_profile_sample(const nsac_profile* profile, size_t k, double* xi, double* v, double* u,
                                         double* lambda);
NSAC_API nsac_status nsac_profile_speed(const nsac_profile* profile, double* speed);
/* CSV with header xi,v,u,lambda_family. */
NSAC_API nsac_status nsac_profile_write_csv(const nsac_profile* profile, const char* path);

/* ---- solver configuration and runs ---------------------------------------- */

typedef struct nsac_config nsac_config;

/* Preset "fig1" or "two_wave" with its grid, times and initial data. */
NSAC_API nsac_status nsac_config_preset(const char* name, nsac_config** out);
NSAC_API void nsac_config_destroy(nsac_config* config);
/* Applies solver keys from the settings; keys not recognised by the solver
 * and absent from `ignored` (n_ignored entries) are a configuration error.
 * The initial data is resampled when the grid changes. */
NSAC_API nsac_status nsac_config_apply(nsac_config* config, const nsac_settings* settings, const char* const* ignored,
                                       size_t n_ignored);
/* Key-value echo of the configuration, owned by the config. */
NSAC_API nsac_status nsac_config_text(nsac_config* config, const char** text);

typedef struct nsac_run nsac_run;

typedef struct nsac_run_info {
  long steps;
  double a;                   /* relaxation speed used */
  size_t snapshots;           /* including the initial state */
  size_t cells;
  double max_mass_defect;     /* relative, over all outputs */
  double max_momentum_defect; /* relative to mass0 * a */
  double max_chi_overshoot;
  double max_wave_speed;
  double effective_viscosity;
  double wall_seconds;
} nsac_run_info;

NSAC_API nsac_status nsac_run_execute(const nsac_config* config, nsac_run** out);
NSAC_API void nsac_run_destroy(nsac_run* run);
NSAC_API nsac_status nsac_run_info_get(const nsac_run* run, nsac_run_info* info);
/* Copies snapshot k into caller arrays of length info.cells; any pointer may be NULL. */
NSAC_API nsac_status nsac_run_snapshot(const nsac_run* run, size_t k, double* t, double* x, double* rho, double* u,
                                       double* chi);
/* Writes <name>_t<time>.csv per output time and <name>_meta.txt into dir. */
NSAC_API nsac_status nsac_run_write(const nsac_run* run, const char* dir, const char* name);

/* ---- epsilon sweeps ------------------------------------------------------------- */

typedef struct nsac_sweep nsac_sweep;

typedef struct nsac_sweep_entry {
  double eps;
  int ok;  /* 0 when the run failed; see nsac_sweep_entry_error */
  double sup_rho, sup_u, sup_chi;
  size_t cells_used, cells_used_chi;
  double wall_seconds;
} nsac_sweep_entry;

/* Runs the config's preset for each eps (strictly decreasing) up to time t and
 * compares with the exact solution away from waves (half-width h). workers = 0
 * uses all hardware threads. */
NSAC_API nsac_status nsac_sweep_execute(const nsac_config* config, const double* eps, size_t n_eps, double h,
                                        double t, unsigned workers, nsac_sweep** out);
NSAC_API void nsac_sweep_destroy(nsac_sweep* sweep);
NSAC_API nsac_status nsac_sweep_size(const nsac_sweep* sweep, size_t* n);
NSAC_API nsac_status nsac_sweep_entry_get(const nsac_sweep* sweep, size_t k, nsac_sweep_entry* entry);
NSAC_API nsac_status nsac_sweep_entry_error(const nsac_sweep* sweep, size_t k, const char** message);
/* 1 when the rho and u errors are non-increasing (5% band) and every run succeeded. */
NSAC_API nsac_status nsac_sweep_monotone(const nsac_sweep* sweep, int* monotone);
/* <name>_sweep.csv and <name>_sweep_summary.txt in dir. */
NSAC_API nsac_status nsac_sweep_write(const nsac_sweep* sweep, const char* dir, const char* name);

#ifdef __cplusplus
}
#endif

#endif

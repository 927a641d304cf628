#include "nsac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace nsac {

namespace {

double edge_fastest(const RiemannSolution& p) { return p.wave(Family::two).fastest; }
double edge_slowest(const RiemannSolution& p) { return p.wave(Family::one).slowest; }

double grid_spacing(const FieldSnapshot& s) {
  if (s.size() < 2) throw DomainError("snapshot needs at least two cells");
  return s.x[1] - s.x[0];
}

double interpolate(const std::vector<double>& x, const std::vector<double>& f, double q) {
  if (q <= x.front()) return f.front();
  if (q >= x.back()) return f.back();
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
  const double w = (q - x[k]) / (x[k + 1] - x[k]);
  return f[k] + w * (f[k + 1] - f[k]);
}

// Sign changes of chi, as linearly interpolated crossing points.
std::vector<double> chi_crossings(const FieldSnapshot& s) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s.chi[i], b = s.chi[i + 1];
    if ((a < 0.0) != (b < 0.0)) out.push_back(s.x[i] + (0.0 - a) / (b - a) * (s.x[i + 1] - s.x[i]));
  }
  return out;
}

}  // namespace

// ---- reference ---------------------------------------------------------------

RiemannChain RiemannChain::from_states(const GasLaw& law, const std::vector<State>& states,
                                       const std::vector<double>& jumps) {
  if (states.size() != jumps.size() + 1 || jumps.empty()) {
    throw DomainError("RiemannChain: need one more state than jump positions, and at least one jump");
  }
  for (std::size_t k = 1; k < jumps.size(); ++k) {
    if (!(jumps[k] > jumps[k - 1])) throw DomainError("RiemannChain: jump positions must increase");
  }
  RiemannChain c;
  c.jumps = jumps;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    c.problems.push_back(solve_riemann_general(law, states[k].to_eulerian(), states[k + 1].to_eulerian()));
  }
  return c;
}

double RiemannChain::overlap_time() const {
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < problems.size(); ++k) {
    const double closing = edge_fastest(problems[k]) - edge_slowest(problems[k + 1]);
    if (closing > 0.0) t = std::min(t, (jumps[k + 1] - jumps[k]) / closing);
  }
  return t;
}

Reference::Reference(const WaveFan& fan) : data_(to_eulerian(fan)) {}

Reference::Reference(RiemannChain chain) : data_(std::move(chain)) {}

State Reference::at(double x, double t) const {
  if (!(t >= 0.0)) throw DomainError("Reference::at: time must be non-negative");
  if (const auto* fan = std::get_if<WaveFan>(&data_)) return evaluate_entropy_solution(*fan, x, t);
  const auto& c = std::get<RiemannChain>(data_);
  if (t > c.overlap_time()) {
    std::ostringstream os;
    os << "Reference::at: Riemann fans interact after t = " << c.overlap_time() << ", no exact reference at t = " << t;
    throw DomainError(os.str());
  }
  std::size_t seg = 0;
  for (std::size_t k = 0; k < c.problems.size(); ++k) {
    const RiemannSolution& p = c.problems[k];
    if (t == 0.0) {
      if (x > c.jumps[k]) seg = k + 1;
      continue;
    }
    const double lo = c.jumps[k] + edge_slowest(p) * t;
    const double hi = c.jumps[k] + edge_fastest(p) * t;
    if (x > lo && x <= hi) return p.sample((x - c.jumps[k]) / t);
    if (x > hi) seg = k + 1;
  }
  return seg == 0 ? c.problems.front().left() : c.problems[seg - 1].right();
}

std::vector<std::pair<double, double>> Reference::wave_intervals(double t) const {
  std::vector<std::pair<double, double>> out;
  if (const auto* f = std::get_if<WaveFan>(&data_)) {
    if (t <= f->t0) {
      const double a = f->x_left + f->s2 * t, b = f->x_right + f->s1 * t;
      out = {{a, a}, {b, b}};
    } else {
      const double a = f->x0 + f->post_s1 * (t - f->t0), b = f->x0 + f->post_s2 * (t - f->t0);
      out = {{a, a}, {b, b}};
    }
    return out;
  }
  const auto& c = std::get<RiemannChain>(data_);
  for (std::size_t k = 0; k < c.problems.size(); ++k) {
    for (Family fam : {Family::one, Family::two}) {
      const Wave& w = c.problems[k].wave(fam);
      out.emplace_back(c.jumps[k] + w.slowest * t, c.jumps[k] + w.fastest * t);
    }
  }
  return out;
}

double Reference::shock_position(Family family, double t, std::size_t index) const {
  if (const auto* f = std::get_if<WaveFan>(&data_)) {
    if (t <= f->t0) return family == Family::two ? f->x_left + f->s2 * t : f->x_right + f->s1 * t;
    return f->x0 + (family == Family::one ? f->post_s1 : f->post_s2) * (t - f->t0);
  }
  const auto& c = std::get<RiemannChain>(data_);
  for (std::size_t k = 0; k < c.problems.size(); ++k) {
    if (index != npos && k != index) continue;
    const Wave& w = c.problems[k].wave(family);
    if (w.kind == WaveKind::shock) return c.jumps[k] + w.slowest * t;
    if (index != npos) break;
  }
  throw DomainError("Reference::shock_position: no shock of family " + to_string(family) + " in the reference");
}

Reference reference_for_preset(const std::string& name, double gamma) {
  const GasLaw law(gamma);
  if (name == "fig1") {
    return Reference(RiemannChain::from_states(law, {State::eulerian(1.0, 0.0), State::eulerian(0.125, 0.0)}, {0.5}));
  }
  if (name == "two_wave") {
    return Reference(RiemannChain::from_states(
        law, {State::eulerian(1.0, 0.0), State::eulerian(0.125, 0.0), State::eulerian(0.5, 0.0)}, {0.5, 1.0}));
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig1 or two_wave)");
}

// ---- errors on Sigma_h ----------------------------------------------------------

void validate(const RegionSpec& r) {
  if (!(r.h > 0.0)) throw ConfigError("region: h must be positive");
  if (!(r.t >= 0.0)) throw ConfigError("region: t must be non-negative");
  if (const auto* f = std::get_if<WaveFan>(&r.reference.data())) {
    if (r.epoch == Epoch::before && !(r.t <= f->t0 - r.h)) {
      std::ostringstream os;
      os << "region: before-interaction epoch needs t <= t0 - h = " << f->t0 - r.h;
      throw ConfigError(os.str());
    }
    if (r.epoch == Epoch::after && !(r.t >= f->t0 + r.h)) {
      std::ostringstream os;
      os << "region: after-interaction epoch needs t >= t0 + h = " << f->t0 + r.h;
      throw ConfigError(os.str());
    }
  }
}

ErrorReport sigma_h_error(const FieldSnapshot& s, const RegionSpec& region, double time_tolerance) {
  validate(region);
  if (std::abs(s.t - region.t) > time_tolerance) {
    std::ostringstream os;
    os << "sigma_h_error: snapshot time " << s.t << " does not match region time " << region.t;
    throw DomainError(os.str());
  }
  const auto waves = region.reference.wave_intervals(region.t);
  const auto crossings = region.mask_interface ? chi_crossings(s) : std::vector<double>{};
  ErrorReport rep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s.x[i];
    bool masked = false;
    for (const auto& [lo, hi] : waves) masked = masked || (x > lo - region.h && x < hi + region.h);
    if (masked) continue;
    const State ex = region.reference.at(x, region.t);
    rep.sup_rho = std::max(rep.sup_rho, std::abs(s.rho[i] - ex.rho()));
    rep.sup_u = std::max(rep.sup_u, std::abs(s.m[i] / s.rho[i] - ex.u()));
    ++rep.cells_used;
    bool near_interface = false;
    for (double c : crossings) near_interface = near_interface || std::abs(x - c) < region.h;
    if (near_interface) continue;
    rep.sup_chi = std::max(rep.sup_chi, std::abs(s.chi[i] * s.chi[i] - 1.0));
    ++rep.cells_used_chi;
  }
  if (rep.cells_used == 0) {
    throw DomainError("sigma_h_error: every cell is masked; use a smaller h");
  }
  return rep;
}

bool non_increasing(const std::vector<double>& v, double tolerance, double floor) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] <= floor && v[k - 1] <= floor) continue;
    if (v[k] > (1.0 + tolerance) * v[k - 1] && v[k] > floor) return false;
  }
  return true;
}

SweepResult epsilon_sweep(const SolverConfig& base, const InitialData& initial, const std::vector<double>& eps_list,
                          const RegionSpec& region, unsigned workers) {
  if (eps_list.empty()) throw ConfigError("epsilon_sweep: eps list is empty");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw ConfigError("epsilon_sweep: eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
      throw ConfigError("epsilon_sweep: eps list must be strictly decreasing");
    }
  }
  validate(region);
  SolverConfig cfg = base;
  cfg.t_end = region.t;
  cfg.out_times = {region.t};
  validate(cfg);
  {
    // reject an empty comparison region before spending any runs on it
    FieldSnapshot probe;
    probe.t = region.t;
    const double dx = cfg.dx();
    for (int i = 0; i < cfg.n_cells; ++i) {
      const double x = cfg.x_lo + (i + 0.5) * dx;
      const State s = region.reference.at(x, region.t);
      probe.x.push_back(x);
      probe.rho.push_back(s.rho());
      probe.m.push_back(s.rho() * s.u());
      probe.chi.push_back(1.0);
    }
    sigma_h_error(probe, region);
  }

  SweepResult res;
  res.entries.resize(eps_list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < eps_list.size(); k = next++) {
      SweepEntry& e = res.entries[k];
      e.eps = eps_list[k];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        SolverConfig c = cfg;
        c.eps = eps_list[k];
        const RunResult r = run(c, initial);
        ErrorReport rep = sigma_h_error(r.snapshots.back(), region);
        rep.eps = c.eps;
        e.report = rep;
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
      e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  unsigned n = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n = static_cast<unsigned>(std::min<std::size_t>(n, eps_list.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<double> er, eu, ec;
  bool all_ok = true;
  for (const auto& e : res.entries) {
    if (!e.report) {
      all_ok = false;
      continue;
    }
    er.push_back(e.report->sup_rho);
    eu.push_back(e.report->sup_u);
    ec.push_back(e.report->sup_chi);
  }
  res.rho_monotone = all_ok && non_increasing(er);
  res.u_monotone = all_ok && non_increasing(eu);
  res.chi_monotone = all_ok && non_increasing(ec, 0.05, 1e-10);
  res.monotone = res.rho_monotone && res.u_monotone;
  return res;
}

// ---- tracking --------------------------------------------------------------------

TrackedShock shock_tracking(const FieldSnapshot& s, const Reference& ref, Family family, double window,
                            std::size_t index) {
  const double dx = grid_spacing(s);
  if (!(window > 0.0)) window = 20.0 * dx;
  const double p = ref.shock_position(family, s.t, index);
  std::vector<std::size_t> faces;
  std::vector<double> grad;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double xf = 0.5 * (s.x[i] + s.x[i + 1]);
    if (std::abs(xf - p) > window) continue;
    faces.push_back(i);
    grad.push_back(std::abs(s.rho[i + 1] - s.rho[i]) / dx);
  }
  if (faces.size() < 3) throw NumericalError("shock_tracking: window around the predicted shock leaves the domain");
  const std::size_t k = static_cast<std::size_t>(std::max_element(grad.begin(), grad.end()) - grad.begin());
  std::vector<double> sorted = grad;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  TrackedShock out;
  out.peak_gradient = grad[k];
  out.background = sorted[sorted.size() / 2];
  if (!(out.peak_gradient > 3.0 * out.background) || out.peak_gradient == 0.0) {
    std::ostringstream os;
    os << "shock_tracking: no gradient peak above 3x background near x = " << p;
    throw NumericalError(os.str());
  }
  const std::size_t i = faces[k];
  double offset = 0.0;
  if (k > 0 && k + 1 < grad.size()) {
    const double den = grad[k - 1] - 2.0 * grad[k] + grad[k + 1];
    if (den < 0.0) offset = std::clamp(0.5 * (grad[k - 1] - grad[k + 1]) / den, -0.5, 0.5);
  }
  out.position = 0.5 * (s.x[i] + s.x[i + 1]) + offset * dx;
  return out;
}

double tracked_shock_speed(const FieldSnapshot& a, const FieldSnapshot& b, const Reference& ref, Family family,
                           double window, std::size_t index) {
  if (!(b.t > a.t)) throw DomainError("tracked_shock_speed: snapshots must be in increasing time");
  const double xa = shock_tracking(a, ref, family, window, index).position;
  const double xb = shock_tracking(b, ref, family, window, index).position;
  return (xb - xa) / (b.t - a.t);
}

std::vector<DetectedShock> detect_shocks(const FieldSnapshot& s, double min_drop, double min_face_drop) {
  const std::vector<double> u = s.velocity();
  std::vector<DetectedShock> out;
  std::size_t i = 0;
  while (i + 1 < s.size()) {
    if (!(u[i + 1] - u[i] < -min_face_drop)) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    std::size_t steepest = i;
    while (i + 1 < s.size() && u[i + 1] - u[i] < -min_face_drop) {
      if (u[i + 1] - u[i] < u[steepest + 1] - u[steepest]) steepest = i;
      ++i;
    }
    const double drop = u[first] - u[i];
    if (drop > min_drop) {
      DetectedShock d;
      d.position = 0.5 * (s.x[steepest] + s.x[steepest + 1]);
      d.family = s.rho[first] > s.rho[i] ? Family::two : Family::one;
      d.velocity_drop = drop;
      out.push_back(d);
    }
  }
  return out;
}

double interface_tracking(const FieldSnapshot& s) {
  const std::vector<double> c = chi_crossings(s);
  if (c.size() != 1) {
    std::ostringstream os;
    os << "interface_tracking: chi changes sign " << c.size() << " times, expected exactly once";
    throw DomainError(os.str());
  }
  return c.front();
}

double advect_marker(const std::vector<FieldSnapshot>& snaps, double x, int substeps) {
  if (snaps.empty()) throw DomainError("advect_marker: no snapshots");
  if (substeps < 1) throw DomainError("advect_marker: substeps must be positive");
  std::vector<std::vector<double>> vel;
  vel.reserve(snaps.size());
  for (const auto& s : snaps) vel.push_back(s.velocity());
  for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
    const double t0 = snaps[k].t, t1 = snaps[k + 1].t;
    if (!(t1 > t0)) throw DomainError("advect_marker: snapshot times must increase");
    auto u_at = [&](double q, double t) {
      const double w = (t - t0) / (t1 - t0);
      return (1.0 - w) * interpolate(snaps[k].x, vel[k], q) + w * interpolate(snaps[k + 1].x, vel[k + 1], q);
    };
    const double h = (t1 - t0) / substeps;
    for (int j = 0; j < substeps; ++j) {
      const double t = t0 + j * h;
      const double k1 = u_at(x, t);
      const double k2 = u_at(x + h * k1, t + h);
      x += 0.5 * h * (k1 + k2);
    }
  }
  return x;
}

}  // namespace nsac

#include "nsac/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <tuple>

#include "nsac/riemann.hpp"

namespace nsac {

namespace {

struct Conserved {
  std::vector<double> rho, m, rchi, v0, v1;

  explicit Conserved(std::size_t n = 0) : rho(n), m(n), rchi(n), v0(n), v1(n) {}
  std::size_t size() const noexcept { return rho.size(); }
};

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

struct Rates {
  Conserved d;
  double inflow_mass = 0.0;
  double inflow_momentum = 0.0;
};

// Spatial operator of the relaxation transport. Characteristic variables
// w+ = V + aU (speed +a) and w- = V - aU (speed -a) are upwinded; rho chi
// rides on the mass flux with an upwind chi.
class Transport {
 public:
  Transport(double a, double dx, int order) : a_(a), dx_(dx), order_(order) {}

  void operator()(const Conserved& c, Rates& out) {
    const std::size_t n = c.size();
    const auto idx = [n](std::ptrdiff_t i) {
      return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
    };
    wp0_.resize(n); wp1_.resize(n); wm0_.resize(n); wm1_.resize(n); chi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      wp0_[i] = c.v0[i] + a_ * c.rho[i];
      wm0_[i] = c.v0[i] - a_ * c.rho[i];
      wp1_[i] = c.v1[i] + a_ * c.m[i];
      wm1_[i] = c.v1[i] - a_ * c.m[i];
      chi_[i] = c.rchi[i] / c.rho[i];
    }
    const bool second = order_ == 2;
    // half slope of q at cell i
    auto half = [&](const std::vector<double>& q, std::ptrdiff_t i) {
      if (!second) return 0.0;
      return 0.5 * minmod(q[idx(i)] - q[idx(i - 1)], q[idx(i + 1)] - q[idx(i)]);
    };
    fr_.resize(n + 1); fm_.resize(n + 1); fc_.resize(n + 1); fv0_.resize(n + 1); fv1_.resize(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
      const auto L = static_cast<std::ptrdiff_t>(f) - 1;
      const auto R = static_cast<std::ptrdiff_t>(f);
      const double p0 = wp0_[idx(L)] + half(wp0_, L);
      const double p1 = wp1_[idx(L)] + half(wp1_, L);
      const double q0 = wm0_[idx(R)] - half(wm0_, R);
      const double q1 = wm1_[idx(R)] - half(wm1_, R);
      fr_[f] = 0.5 * (p0 + q0);
      fm_[f] = 0.5 * (p1 + q1);
      fv0_[f] = 0.5 * a_ * (p0 - q0);
      fv1_[f] = 0.5 * a_ * (p1 - q1);
      const double chi_face = fr_[f] >= 0.0 ? chi_[idx(L)] + half(chi_, L) : chi_[idx(R)] - half(chi_, R);
      fc_[f] = fr_[f] * chi_face;
    }
    if (out.d.size() != n) out.d = Conserved(n);
    const double k = 1.0 / dx_;
    for (std::size_t i = 0; i < n; ++i) {
      out.d.rho[i] = -k * (fr_[i + 1] - fr_[i]);
      out.d.m[i] = -k * (fm_[i + 1] - fm_[i]);
      out.d.rchi[i] = -k * (fc_[i + 1] - fc_[i]);
      out.d.v0[i] = -k * (fv0_[i + 1] - fv0_[i]);
      out.d.v1[i] = -k * (fv1_[i + 1] - fv1_[i]);
    }
    out.inflow_mass = fr_[0] - fr_[n];
    out.inflow_momentum = fm_[0] - fm_[n];
  }

 private:
  double a_, dx_;
  int order_;
  std::vector<double> wp0_, wp1_, wm0_, wm1_, chi_;
  std::vector<double> fr_, fm_, fc_, fv0_, fv1_;
};

void axpy(Conserved& y, const Conserved& x, const Conserved& d, double dt) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    y.rho[i] = x.rho[i] + dt * d.rho[i];
    y.m[i] = x.m[i] + dt * d.m[i];
    y.rchi[i] = x.rchi[i] + dt * d.rchi[i];
    y.v0[i] = x.v0[i] + dt * d.v0[i];
    y.v1[i] = x.v1[i] + dt * d.v1[i];
  }
}

void check_density(const Conserved& c, double t) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c.rho[i] > 0.0)) {
      std::ostringstream os;
      os << "step: density " << c.rho[i] << " at cell " << i << " near t = " << t
         << " (try a smaller cfl or a larger a)";
      throw NumericalError(os.str());
    }
  }
}

// Tridiagonal solve, sub/diag/sup overwritten.
void thomas(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
            std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

std::vector<double> cell_centers(const SolverConfig& c) {
  std::vector<double> x(static_cast<std::size_t>(c.n_cells));
  const double dx = c.dx();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = c.x_lo + (static_cast<double>(i) + 0.5) * dx;
  return x;
}

// Linear interpolation of u = m / rho between cell centers, constant beyond them.
double velocity_at(const FieldSnapshot& s, double q) {
  const std::size_t n = s.size();
  if (q <= s.x.front()) return s.m.front() / s.rho.front();
  if (q >= s.x.back()) return s.m.back() / s.rho.back();
  const double dx = s.x[1] - s.x[0];
  const auto k = std::min(n - 2, static_cast<std::size_t>((q - s.x.front()) / dx));
  const double w = (q - s.x[k]) / dx;
  return (1.0 - w) * s.m[k] / s.rho[k] + w * s.m[k + 1] / s.rho[k + 1];
}

double interface_profile(double x, double center) { return std::tanh((x - center) / (0.1 * std::sqrt(5.0))); }

}  // namespace

void validate(const SolverConfig& c) {
  auto bad = [](const std::string& what) { throw ConfigError("solver config: " + what); };
  if (!(c.gamma > 1.0)) bad("gamma must exceed 1");
  if (!(c.eps > 0.0)) bad("eps must be positive");
  if (!(c.a >= 0.0)) bad("a must be positive, or 0 for automatic selection");
  if (!(c.a_margin >= 1.0)) bad("a_margin must be at least 1");
  if (!(c.x_hi > c.x_lo)) bad("domain must satisfy x_lo < x_hi");
  if (c.n_cells < 16) bad("n_cells must be at least 16");
  if (!(c.cfl > 0.0 && c.cfl < 1.0)) bad("cfl must lie in (0, 1)");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) bad("t_end must be finite and non-negative");
  if (!(c.mobility_const > 0.0)) bad("mobility_const must be positive");
  if (!(c.stabilizer >= 2.0)) bad("stabilizer must be at least 2 = max |3 chi^2 - 1| on [-1, 1]");
  if (c.order != 1 && c.order != 2) bad("order must be 1 or 2");
  for (double t : c.out_times) {
    if (!(t > 0.0 && t <= c.t_end)) bad("output times must lie in (0, t_end]");
  }
}

std::vector<double> FieldSnapshot::velocity() const {
  std::vector<double> u(rho.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = m[i] / rho[i];
  return u;
}

std::vector<std::string> preset_names() { return {"fig1", "two_wave"}; }

InitialData preset_initial_data(const std::string& name, const SolverConfig& config) {
  const std::vector<double> x = cell_centers(config);
  InitialData d;
  d.rho.resize(x.size());
  d.u.assign(x.size(), 0.0);
  d.chi.resize(x.size());
  if (name == "fig1") {
    for (std::size_t i = 0; i < x.size(); ++i) {
      d.rho[i] = x[i] < 0.5 ? 1.0 : 0.125;
      d.chi[i] = interface_profile(x[i], 0.5);
    }
  } else if (name == "two_wave") {
    for (std::size_t i = 0; i < x.size(); ++i) {
      d.rho[i] = x[i] < 0.5 ? 1.0 : (x[i] < 1.0 ? 0.125 : 0.5);
      d.chi[i] = interface_profile(x[i], 0.75);
    }
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig1 or two_wave)");
  }
  return d;
}

Preset make_preset(const std::string& name) {
  SolverConfig c;
  c.preset = name;
  if (name == "fig1") {
    c.x_lo = 0.0;
    c.x_hi = 1.0;
    c.n_cells = 1000;
    c.eps = 4e-4;
    c.t_end = 0.2;
    c.out_times = {0.2};
  } else if (name == "two_wave") {
    c.x_lo = 0.0;
    c.x_hi = 1.5;
    c.n_cells = 2000;
    c.eps = 5e-4;
    c.t_end = 0.4;
    c.out_times = {0.08, 0.4};
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig1 or two_wave)");
  }
  return {c, preset_initial_data(name, c)};
}

double auto_relaxation_speed(const SolverConfig& config, const InitialData& d) {
  const GasLaw law(config.gamma);
  std::vector<State> states;
  std::vector<State> middles;
  for (std::size_t i = 0; i < d.rho.size(); ++i) {
    states.push_back(State::eulerian(d.rho[i], d.u[i]));
    if (i == 0 || (d.rho[i] == d.rho[i - 1] && d.u[i] == d.u[i - 1])) continue;
    try {
      const State l = State::eulerian(d.rho[i - 1], d.u[i - 1]);
      middles.push_back(solve_riemann_general(law, l, states.back()).middle());
    } catch (const AdmissibilityError& e) {
      throw ConfigError(std::string("initial data forms vacuum: ") + e.what());
    }
  }
  for (std::size_t j = 0; j + 1 < middles.size(); ++j) {
    try {
      states.push_back(solve_riemann_general(law, middles[j], middles[j + 1]).middle());
    } catch (const AdmissibilityError&) {
      // the waves separate; nothing faster than the states already listed
    }
  }
  states.insert(states.end(), middles.begin(), middles.end());
  return choose_a_eulerian(law, states, config.a_margin).a;
}

FieldSnapshot initialize(const SolverConfig& config, const InitialData& d) {
  validate(config);
  const auto n = static_cast<std::size_t>(config.n_cells);
  if (d.rho.size() != n || d.u.size() != n || d.chi.size() != n) {
    throw DomainError("initialize: initial arrays must have n_cells entries");
  }
  const GasLaw law(config.gamma);
  FieldSnapshot s;
  s.x = cell_centers(config);
  s.rho = d.rho;
  s.chi = d.chi;
  s.m.resize(n);
  s.v_aux.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d.rho[i] > 0.0)) {
      std::ostringstream os;
      os << "initialize: non-positive density " << d.rho[i] << " at cell " << i;
      throw DomainError(os.str());
    }
    if (!(std::abs(d.chi[i]) <= 1.0)) {
      std::ostringstream os;
      os << "initialize: phase field " << d.chi[i] << " outside [-1, 1] at cell " << i;
      throw DomainError(os.str());
    }
    s.m[i] = d.rho[i] * d.u[i];
    s.v_aux[i] = euler_flux(law, State::eulerian(d.rho[i], d.u[i]), 0.0, 0.0);
  }
  return s;
}

std::vector<double> chemical_potential(const FieldSnapshot& s, const SolverConfig& config) {
  const std::size_t n = s.size();
  const double dx = config.dx();
  const double e2 = config.eps * config.eps;
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = s.chi[i];
    const double l = s.chi[i == 0 ? 0 : i - 1];
    const double r = s.chi[i + 1 == n ? i : i + 1];
    mu[i] = (c * c * c - c) - e2 / s.rho[i] * (r - 2.0 * c + l) / (dx * dx);
  }
  return mu;
}

FieldSnapshot step(const FieldSnapshot& state, const SolverConfig& config, double dt, StepReport* report) {
  if (!(config.a > 0.0)) throw ConfigError("step: relaxation speed a must be resolved (> 0)");
  const std::size_t n = state.size();
  if (n != static_cast<std::size_t>(config.n_cells)) throw DomainError("step: snapshot size does not match n_cells");
  const GasLaw law(config.gamma);
  const double g = config.gamma;
  const double a = config.a;
  const double dx = config.dx();
  const double eps = config.eps;
  if (!(dt > 0.0)) dt = config.cfl * dx / a;

  Conserved c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.rho[i] = state.rho[i];
    c.m[i] = state.m[i];
    c.rchi[i] = state.rho[i] * state.chi[i];
    c.v0[i] = state.v_aux[i][0];
    c.v1[i] = state.v_aux[i][1];
  }

  // (i) relaxation transport
  Transport transport(a, dx, config.order);
  Rates r1, r2;
  double inflow_mass = 0.0, inflow_momentum = 0.0;
  transport(c, r1);
  Conserved stage(n);
  axpy(stage, c, r1.d, dt);
  if (config.order == 1) {
    c = std::move(stage);
    inflow_mass = dt * r1.inflow_mass;
    inflow_momentum = dt * r1.inflow_momentum;
  } else {
    check_density(stage, state.t + dt);
    transport(stage, r2);
    Conserved next(n);
    axpy(next, stage, r2.d, dt);
    for (std::size_t i = 0; i < n; ++i) {
      c.rho[i] = 0.5 * (c.rho[i] + next.rho[i]);
      c.m[i] = 0.5 * (c.m[i] + next.m[i]);
      c.rchi[i] = 0.5 * (c.rchi[i] + next.rchi[i]);
      c.v0[i] = 0.5 * (c.v0[i] + next.v0[i]);
      c.v1[i] = 0.5 * (c.v1[i] + next.v1[i]);
    }
    inflow_mass = 0.5 * dt * (r1.inflow_mass + r2.inflow_mass);
    inflow_momentum = 0.5 * dt * (r1.inflow_momentum + r2.inflow_momentum);
  }
  check_density(c, state.t + dt);

  // (ii) exact relaxation toward equilibrium at frozen U
  const double decay = std::exp(-dt / eps);
  for (std::size_t i = 0; i < n; ++i) {
    const double f0 = c.m[i];
    const double f1 = c.m[i] * c.m[i] / c.rho[i] + std::pow(c.rho[i], g);
    c.v0[i] = f0 + (c.v0[i] - f0) * decay;
    c.v1[i] = f1 + (c.v1[i] - f1) * decay;
  }

  // (iii) capillary momentum flux (eps^2/2) chi_x^2 on interior faces; zero at the outflow ends
  std::vector<double> chi(n);
  for (std::size_t i = 0; i < n; ++i) chi[i] = c.rchi[i] / c.rho[i];
  {
    const double k = 0.5 * eps * eps / (dx * dx);
    double left = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double right = 0.0;
      if (i + 1 < n) {
        const double d = chi[i + 1] - chi[i];
        right = k * d * d;
      }
      c.m[i] -= dt / dx * (right - left);
      left = right;
    }
  }

  // (iv) stabilized semi-implicit Allen-Cahn: cubic explicit, S and Laplacian implicit
  double overshoot = 0.0;
  {
    const double S = config.stabilizer;
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double kmob = dt * config.mobility_const / (eps * c.rho[i]);
      const double lap = kmob * eps * eps / (c.rho[i] * dx * dx);
      const double x = chi[i];
      rhs[i] = x + kmob * (S * x - (x * x * x - x));
      sub[i] = i == 0 ? 0.0 : -lap;
      sup[i] = i + 1 == n ? 0.0 : -lap;
      diag[i] = 1.0 + kmob * S + (i == 0 ? 0.0 : lap) + (i + 1 == n ? 0.0 : lap);
    }
    thomas(sub, diag, sup, rhs);
    for (std::size_t i = 0; i < n; ++i) {
      overshoot = std::max(overshoot, std::abs(rhs[i]) - 1.0);
      chi[i] = std::clamp(rhs[i], -1.0, 1.0);
    }
  }

  FieldSnapshot out;
  out.t = state.t + dt;
  out.x = state.x;
  out.rho = std::move(c.rho);
  out.m = std::move(c.m);
  out.chi = std::move(chi);
  out.v_aux.resize(n);
  double speed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.v_aux[i] = {c.v0[i], c.v1[i]};
    speed = std::max(speed, std::abs(out.m[i] / out.rho[i]) + eulerian_sound_speed(law, out.rho[i]));
  }
  if (!(speed < a)) {
    std::ostringstream os;
    os << "step: sub-characteristic condition violated at t = " << out.t << ", max(|u| + c) = " << speed
       << " >= a = " << a << "; increase a";
    throw NumericalError(os.str());
  }
  if (report) *report = {dt, std::max(overshoot, 0.0), speed, inflow_mass, inflow_momentum};
  return out;
}

double ConservationLedger::mass_defect() const noexcept {
  return std::abs(mass - mass0 - inflow_mass) / mass0;
}

double ConservationLedger::momentum_defect(double a_scale) const noexcept {
  return std::abs(momentum - momentum0 - inflow_momentum) / (mass0 * a_scale);
}

RunResult run(const SolverConfig& config_in, const InitialData& initial) {
  const auto start = std::chrono::steady_clock::now();
  validate(config_in);
  RunResult res;
  res.config = config_in;
  if (!(res.config.a > 0.0)) res.config.a = auto_relaxation_speed(res.config, initial);
  const SolverConfig& config = res.config;
  const double dx = config.dx();

  FieldSnapshot s = initialize(config, initial);
  auto totals = [dx](const FieldSnapshot& f) {
    double mass = 0.0, mom = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      mass += f.rho[i] * dx;
      mom += f.m[i] * dx;
    }
    return std::pair{mass, mom};
  };
  ConservationLedger ledger;
  std::tie(ledger.mass0, ledger.momentum0) = totals(s);
  ledger.mass = ledger.mass0;
  ledger.momentum = ledger.momentum0;
  std::vector<double> markers = config.markers;
  res.snapshots.push_back(s);
  res.ledgers.push_back(ledger);
  res.marker_positions.push_back(markers);

  std::vector<double> times = config.out_times;
  if (times.empty() && config.t_end > 0.0) times.push_back(config.t_end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const double dt_max = config.cfl * dx / config.a;
  double max_speed = 0.0;
  for (double t_out : times) {
    while (s.t < t_out) {
      const double remaining = t_out - s.t;
      const bool last = remaining <= dt_max * (1.0 + 1e-12);
      StepReport rep;
      FieldSnapshot next = step(s, config, last ? remaining : dt_max, &rep);
      for (double& xm : markers) {
        // Heun step on the fields at both ends of the step
        const double k1 = velocity_at(s, xm);
        const double k2 = velocity_at(next, xm + rep.dt * k1);
        xm += 0.5 * rep.dt * (k1 + k2);
      }
      s = std::move(next);
      if (last) s.t = t_out;
      ++res.steps;
      ledger.inflow_mass += rep.boundary_mass;
      ledger.inflow_momentum += rep.boundary_momentum;
      res.max_chi_overshoot = std::max(res.max_chi_overshoot, rep.chi_overshoot);
      max_speed = std::max(max_speed, rep.max_wave_speed);
    }
    std::tie(ledger.mass, ledger.momentum) = totals(s);
    ledger.t = s.t;
    res.snapshots.push_back(s);
    res.ledgers.push_back(ledger);
    res.marker_positions.push_back(markers);
  }
  res.max_wave_speed = max_speed;
  res.effective_viscosity = config.eps * (config.a * config.a - max_speed * max_speed);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace nsac

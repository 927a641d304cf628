#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nsac/harness.hpp"
#include "nsac/solver.hpp"
#include "support.hpp"

using namespace nsac;

namespace {

SolverConfig small_config(int n, double t_end) {
  SolverConfig c;
  c.n_cells = n;
  c.t_end = t_end;
  c.out_times = {t_end};
  return c;
}

InitialData uniform(int n, double rho, double u, double chi) {
  return {std::vector<double>(n, rho), std::vector<double>(n, u), std::vector<double>(n, chi)};
}

// fig1 shock speed from the bisection middle state and the mass jump condition
double fig1_shock_speed() {
  const double g = 1.4;
  const double p = testing::bisect_middle_pressure(g, 1.0, 0.0, 0.125, 0.0);
  const double rho_star = std::pow(p, 1.0 / g);
  const double u_star = std::sqrt((p - std::pow(0.125, g)) * (1.0 / 0.125 - 1.0 / rho_star));
  return rho_star * u_star / (rho_star - 0.125);
}

double rightmost_shock(const FieldSnapshot& s) {
  const auto shocks = detect_shocks(s);
  REQUIRE(!shocks.empty());
  return std::max_element(shocks.begin(), shocks.end(),
                          [](const auto& a, const auto& b) { return a.position < b.position; })
      ->position;
}

}  // namespace

TEST_CASE("solver: config validation") {
  SolverConfig c;
  CHECK_NOTHROW(validate(c));
  auto rejects = [](SolverConfig c) { CHECK_THROWS_AS(validate(c), ConfigError); };
  SolverConfig b = c;
  b.gamma = 1.0;
  rejects(b);
  b = c;
  b.eps = 0.0;
  rejects(b);
  b = c;
  b.cfl = 1.0;
  rejects(b);
  b = c;
  b.n_cells = 8;
  rejects(b);
  b = c;
  b.stabilizer = 1.5;
  rejects(b);
  b = c;
  b.order = 3;
  rejects(b);
  b = c;
  b.out_times = {0.3};
  rejects(b);
  CHECK_THROWS_AS(make_preset("nope"), ConfigError);
}

TEST_CASE("solver: initialization sets V = F(U) and rejects bad cells") {
  const Preset p = make_preset("fig1");
  const FieldSnapshot s = initialize(p.config, p.initial);
  REQUIRE(s.size() == 1000);
  CHECK(s.x[0] == doctest::Approx(0.0005).epsilon(1e-14));
  CHECK(s.rho[0] == 1.0);
  CHECK(s.rho[999] == 0.125);
  CHECK(s.chi[0] == doctest::Approx(std::tanh(-0.4995 / (0.1 * std::sqrt(5.0)))).epsilon(1e-14));
  for (std::size_t i = 0; i < s.size(); i += 97) {
    CHECK(s.v_aux[i][0] == s.m[i]);
    CHECK(s.v_aux[i][1] == doctest::Approx(s.m[i] * s.m[i] / s.rho[i] + std::pow(s.rho[i], 1.4)).epsilon(1e-15));
  }
  InitialData bad = p.initial;
  bad.rho[17] = 0.0;
  CHECK_THROWS_AS(initialize(p.config, bad), DomainError);
  bad = p.initial;
  bad.chi[3] = 1.5;
  CHECK_THROWS_AS(initialize(p.config, bad), DomainError);
}

TEST_CASE("solver: chemical potential of pure phases and a resolved interface") {
  SolverConfig c = small_config(200, 0.1);
  for (double v : {1.0, -1.0, 0.0}) {
    const FieldSnapshot s = initialize(c, uniform(200, 0.7, 0.0, v));
    for (double mu : chemical_potential(s, c)) CHECK(std::abs(mu) < 1e-15);
  }
  // tanh(x / (eps sqrt 2)) is a stationary interface when rho = 1: mu = O(dx^2)
  double prev = 0.0;
  for (int n : {200, 400, 800}) {
    SolverConfig r = small_config(n, 0.1);
    r.x_lo = -0.5;
    r.x_hi = 0.5;
    r.eps = 0.05;
    InitialData d = uniform(n, 1.0, 0.0, 0.0);
    const double dx = r.dx();
    for (int i = 0; i < n; ++i) d.chi[i] = std::tanh((r.x_lo + (i + 0.5) * dx) / (r.eps * std::sqrt(2.0)));
    const auto mu = chemical_potential(initialize(r, d), r);
    double worst = 0.0;
    for (int i = n / 4; i < 3 * n / 4; ++i) worst = std::max(worst, std::abs(mu[i]));
    if (prev > 0.0) CHECK(prev / worst == doctest::Approx(4.0).epsilon(0.1));
    prev = worst;
  }
}

TEST_CASE("solver: uniform equilibrium is a fixed point") {
  SolverConfig c = small_config(64, 0.1);
  c.a = 3.0;
  for (double chi : {1.0, -1.0}) {
    const FieldSnapshot s0 = initialize(c, uniform(64, 0.4, 0.3, chi));
    FieldSnapshot s = s0;
    for (int k = 0; k < 20; ++k) s = step(s, c);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(std::abs(s.rho[i] - 0.4) < 1e-14);
      CHECK(std::abs(s.m[i] - 0.12) < 1e-14);
      CHECK(std::abs(s.chi[i] - chi) < 1e-14);
    }
  }
}

TEST_CASE("solver: step requires a resolved relaxation speed and sub-characteristic a") {
  SolverConfig c = small_config(64, 0.1);
  const FieldSnapshot s = initialize(c, uniform(64, 1.0, 0.0, 1.0));
  CHECK_THROWS_AS(step(s, c), ConfigError);
  c.a = 1.0;  // c(rho = 1) = sqrt(1.4) > 1
  CHECK_THROWS_AS(step(s, c), NumericalError);
}

TEST_CASE("solver: t_end = 0 returns only the initial state") {
  SolverConfig c = small_config(64, 0.0);
  c.out_times.clear();
  const RunResult r = run(c, uniform(64, 1.0, 0.0, 1.0));
  CHECK(r.snapshots.size() == 1);
  CHECK(r.steps == 0);
  CHECK(r.snapshots[0].t == 0.0);
}

TEST_CASE("solver: fig1 conserves mass and momentum, keeps chi bounded, lands on output times") {
  Preset p = make_preset("fig1");
  p.config.n_cells = 400;
  p.config.out_times = {0.05, 0.2};
  p.initial = preset_initial_data("fig1", p.config);
  const RunResult r = run(p.config, p.initial);
  REQUIRE(r.snapshots.size() == 3);
  CHECK(r.snapshots[1].t == 0.05);
  CHECK(r.snapshots[2].t == 0.2);
  CHECK(r.config.a > 0.0);
  for (const auto& l : r.ledgers) {
    CHECK(l.mass_defect() <= 1e-10);
    CHECK(l.momentum_defect(r.config.a) <= 1e-10);
  }
  CHECK(r.max_chi_overshoot < 1e-12);
  CHECK(r.max_wave_speed < r.config.a);
  CHECK(r.effective_viscosity > 0.0);
  for (const auto& s : r.snapshots) {
    for (double v : s.chi) CHECK(std::abs(v) <= 1.0);
    for (double v : s.rho) CHECK(v > 0.0);
  }
}

TEST_CASE("solver: fig1 shock position matches the exact solution") {
  Preset p = make_preset("fig1");
  const RunResult r = run(p.config, p.initial);
  const double exact = 0.5 + fig1_shock_speed() * 0.2;
  CHECK(std::abs(rightmost_shock(r.snapshots.back()) - exact) <= 2.0 * p.config.dx());
}

TEST_CASE("solver: density error decreases under grid refinement") {
  const double g = 1.4;
  const double p = testing::bisect_middle_pressure(g, 1.0, 0.0, 0.125, 0.0);
  const double rho_star = std::pow(p, 1.0 / g);
  const double u_star = std::sqrt((p - std::pow(0.125, g)) * (1.0 / 0.125 - 1.0 / rho_star));
  const double speed = rho_star * u_star / (rho_star - 0.125);
  const double t = 0.1;
  // L1 error of rho against the exact state on the plateau side of the shock
  auto l1 = [&](int n) {
    Preset pr = make_preset("fig1");
    pr.config.n_cells = n;
    pr.config.t_end = t;
    pr.config.out_times = {t};
    pr.initial = preset_initial_data("fig1", pr.config);
    const FieldSnapshot s = run(pr.config, pr.initial).snapshots.back();
    const double xs = 0.5 + speed * t;
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.x[i] < 0.7) continue;
      e += std::abs(s.rho[i] - (s.x[i] < xs ? rho_star : 0.125)) * pr.config.dx();
    }
    return e;
  };
  const double e1 = l1(200), e2 = l1(400), e3 = l1(800);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
}

TEST_CASE("solver: first order runs and is more diffusive") {
  Preset p = make_preset("fig1");
  p.config.n_cells = 400;
  p.config.t_end = 0.1;
  p.config.out_times = {0.1};
  p.initial = preset_initial_data("fig1", p.config);
  const auto width = [](const FieldSnapshot& s) {
    // cells strictly between the two plateau densities around the shock
    int k = 0;
    for (std::size_t i = 0; i < s.size(); ++i) k += s.x[i] > 0.6 && s.rho[i] > 0.14 && s.rho[i] < 0.36;
    return k;
  };
  const int w2 = width(run(p.config, p.initial).snapshots.back());
  p.config.order = 1;
  const int w1 = width(run(p.config, p.initial).snapshots.back());
  CHECK(w1 >= w2);
}

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsac/harness.hpp"
#include "nsac/profiles.hpp"
#include "support.hpp"

using namespace nsac;
using nsac::testing::plant_fan;
using nsac::testing::shock_of_strength;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ---- RH / Lax -----------------------------------------------------------------------

Outcome rh_lax_suite() {
  const GasLaw law(1.4);
  Outcome o;
  double worst_rh = 0.0, worst_roundtrip = 0.0;
  int lax_failures = 0, shocks = 0, fans = 0;
  const double anchors_v[] = {0.6, 0.9, 1.0, 1.3, 1.7};
  const double anchors_u[] = {-0.4, 0.0, 0.25, 0.6, -1.0};
  for (int k = 0; k < 50; ++k) {
    const double delta = 0.01 * std::pow(50.0, k / 49.0);  // 0.01 .. 0.5
    const State anchor = State::lagrangian(anchors_v[k % 5], anchors_u[(k / 5) % 5]);
    const Family fam = k % 2 ? Family::one : Family::two;
    const Side side = (k / 2) % 2 ? Side::left : Side::right;
    const ShockWave w = shock_of_strength(law, anchor, fam, side, delta);
    ++shocks;
    const double scale = 1.0 + std::abs(w.speed) * (std::abs(w.left.v()) + std::abs(w.left.u()));
    worst_rh = std::max(worst_rh, rh_residual(law, w) / scale);
    if (!satisfies_lax(law, w, 1e-12)) ++lax_failures;
  }
  for (int k = 0; k < 25; ++k) {
    const double d1 = 0.01 * std::pow(50.0, (k % 5) / 4.0);
    const double d2 = 0.01 * std::pow(50.0, (k / 5) / 4.0);
    const State star = State::lagrangian(anchors_v[k % 5], anchors_u[(k + 2) % 5]);
    const auto planted = plant_fan(law, star, d1, d2);
    const WaveFan f = solve_two_shock(law, planted.minus, planted.plus);
    ++fans;
    worst_roundtrip = std::max({worst_roundtrip, std::abs(f.star.v() - star.v()) / star.v(),
                                std::abs(f.star.u() - star.u()) / (1.0 + std::abs(star.u()))});
    for (const ShockWave& w : {f.incoming_1(), f.incoming_2()}) {
      if (!satisfies_lax(law, w, 1e-12)) ++lax_failures;
    }
  }
  o.pass = worst_rh <= 1e-10 && lax_failures == 0 && worst_roundtrip <= 1e-10;
  o.detail = (Detail() << shocks << " shocks, max RH residual " << sci(worst_rh) << ", Lax failures " << lax_failures
                       << ", " << fans << " planted fans, max middle-state error " << sci(worst_roundtrip))
                 .str();
  return o;
}

// ---- interaction algebra ----------------------------------------------------------------

Outcome interaction_algebra() {
  const GasLaw law(1.4);
  Outcome o;
  double worst_q = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double d1 = 0.02 + 0.02 * (k % 5);
    const double d2 = 0.03 + 0.05 * (k / 5);
    const auto planted = plant_fan(law, State::lagrangian(0.7 + 0.1 * (k % 7), 0.1 * (k % 3) - 0.1), d1, d2);
    const WaveFan f = solve_two_shock(law, planted.minus, planted.plus);
    // intersection of x = s2 t and x = 1 + s1 t by Cramer's rule on the 2x2 system
    const double det = f.s2 - f.s1;  // rows (1, -s2 | 0), (1, -s1 | 1) for (x, t)
    const double x_direct = (0.0 * -f.s1 - -f.s2 * 1.0) / det;
    const double t_direct = (1.0 * 1.0 - 1.0 * 0.0) / det;
    const double x_formula = f.s2 / (f.s2 - f.s1);
    const double t_formula = 1.0 / (f.s2 - f.s1);
    worst_q = std::max({worst_q, std::abs(x_direct - x_formula), std::abs(t_direct - t_formula),
                        std::abs(f.x0 - x_formula), std::abs(f.t0 - t_formula)});
  }
  double worst_spread = 0.0;
  for (double v_star : {0.8, 1.0, 1.4}) {
    std::vector<double> c;
    for (double d : {0.05, 0.1, 0.2}) {
      const auto planted = plant_fan(law, State::lagrangian(v_star, 0.0), d, d);
      const Strengths& s = solve_two_shock(law, planted.minus, planted.plus).strengths;
      c.push_back(std::max(std::abs(s.outgoing1 - s.incoming1), std::abs(s.outgoing2 - s.incoming2)) /
                  (s.incoming1 * s.incoming2));
    }
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    worst_spread = std::max(worst_spread, *hi / *lo);
    if (!(*lo > 0.0)) worst_spread = INFINITY;
  }
  o.pass = worst_q <= 1e-14 && worst_spread < 2.0;
  o.detail = (Detail() << "20 fans, max |Q - line intersection| " << sci(worst_q)
                       << ", strength constant spread over delta in {0.05,0.1,0.2}: " << worst_spread << "x (< 2x)")
                 .str();
  return o;
}

// ---- profiles ----------------------------------------------------------------------------

Outcome profile_suite() {
  const GasLaw law(1.4);
  Outcome o;
  double worst_ode = 0.0, worst_end = 0.0;
  int non_monotone = 0, profiles = 0;
  const double strengths[] = {0.02, 0.05, 0.1, 0.15, 0.2, 0.3};
  for (int k = 0; k < 12; ++k) {
    const Family fam = k < 6 ? Family::two : Family::one;
    const State anchor = State::lagrangian(0.8 + 0.1 * (k % 4), 0.2 * (k % 3) - 0.2);
    const ShockWave w = shock_of_strength(law, anchor, fam, k % 2 ? Side::left : Side::right, strengths[k % 6]);
    const double c_min = lagrangian_sound_speed(law, std::min(w.left.v(), w.right.v()));
    for (double margin : {1.1, 1.3, 1.6}) {
      const ShockProfile p = compute_profile(law, w, margin * c_min);
      const ProfileDiagnostics d = diagnose_profile(p);
      ++profiles;
      worst_ode = std::max(worst_ode, d.ode_residual / p.strength());
      worst_end = std::max({worst_end, d.end_residual_left, d.end_residual_right});
      if (!d.eigenvalue_monotone) ++non_monotone;
    }
  }
  std::vector<double> ratio;
  for (double delta : {0.05, 0.1, 0.2}) {
    const ShockWave w = shock_of_strength(law, State::lagrangian(1.0, 0.0), Family::two, Side::right, delta);
    const ShockProfile p = compute_profile(law, w, 1.2 * lagrangian_sound_speed(law, w.left.v()));
    const ProfileDiagnostics d = diagnose_profile(p);
    ratio.push_back(std::min(d.decay_rate_left, d.decay_rate_right) / delta);
  }
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  const double spread = *lo > 0.0 ? *hi / *lo : INFINITY;
  o.pass = worst_ode <= 1e-6 && worst_end <= 1e-6 && non_monotone == 0 && spread < 2.0;
  o.detail = (Detail() << profiles << " profiles, max ODE residual/strength " << sci(worst_ode) << ", max end residual "
                       << sci(worst_end) << ", non-monotone lambda " << non_monotone
                       << ", decay rate/strength spread " << spread << "x (< 2x)")
                 .str();
  return o;
}

// ---- shifts --------------------------------------------------------------------------------

Outcome shift_suite() {
  const GasLaw law(1.4);
  const auto planted = plant_fan(law, State::lagrangian(1.2, 0.0), 0.12, 0.08);
  const WaveFan fan = solve_two_shock(law, planted.minus, planted.plus);
  const double a =
      1.2 * lagrangian_sound_speed(law, std::min({fan.minus.v(), fan.star.v(), fan.plus.v(), fan.post_star.v()}));
  const FanProfiles fp = compute_fan_profiles(fan, a);
  const double r = 1.5 * std::max(fp.outgoing.first().xi_max(), fp.outgoing.second().xi_max());
  const SampledField base = sample_superposition(fp.outgoing, 0.0, -r, r, 8001);

  Outcome o;
  const Shifts zero = compute_shifts(base, fp.outgoing, fan.minus, fan.plus);
  const double zero_size = std::max(std::abs(zero.b1), std::abs(zero.b2));

  std::mt19937 gen(20240611);
  std::uniform_real_distribution<double> amp(-0.02, 0.02), centre(-0.5 * r, 0.5 * r), width(0.05 * r, 0.2 * r);
  double worst_residual = 0.0, worst_shift = 0.0;
  for (int k = 0; k < 10; ++k) {
    SampledField f = base;
    const double c = centre(gen), w = width(gen), av = amp(gen), au = amp(gen);
    for (std::size_t i = 0; i < f.y.size(); ++i) {
      const double g = std::exp(-std::pow((f.y[i] - c) / w, 2));
      f.values[i][0] += av * g;
      f.values[i][1] += au * g;
    }
    const Shifts b = compute_shifts(f, fp.outgoing, fan.minus, fan.plus);
    const Vec2 res = mass_difference(f, fp.outgoing.shifted(b.b1, b.b2));
    worst_residual = std::max(worst_residual, std::hypot(res[0], res[1]));
    worst_shift = std::max({worst_shift, std::abs(b.b1), std::abs(b.b2)});
  }
  o.pass = zero_size <= 1e-8 && worst_residual <= 1e-8;
  o.detail = (Detail() << "unperturbed shifts " << sci(zero_size) << ", 10 perturbed fields: max |I(b)| "
                       << sci(worst_residual) << " (shifts up to " << sci(worst_shift) << ")")
                 .str();
  return o;
}

// ---- solver conservation ---------------------------------------------------------------------

Outcome conservation() {
  Outcome o;
  Detail d;
  for (const char* name : {"fig1", "two_wave"}) {
    const Preset p = make_preset(name);
    const RunResult r = run(p.config, p.initial);
    double mass = 0.0, mom = 0.0, chi = 0.0;
    for (const auto& l : r.ledgers) {
      mass = std::max(mass, l.mass_defect());
      mom = std::max(mom, l.momentum_defect(r.config.a));
    }
    for (const auto& s : r.snapshots) {
      for (double c : s.chi) chi = std::max(chi, std::abs(c));
    }
    const bool ok = mass <= 1e-10 && mom <= 1e-10 && chi <= 1.0 && r.max_chi_overshoot < 1e-3 && r.wall_seconds < 120;
    o.pass = o.pass && ok;
    d << name << ": mass " << sci(mass) << ", momentum " << sci(mom) << ", max|chi| " << chi << ", overshoot "
      << sci(r.max_chi_overshoot) << "; ";
  }
  o.detail = d.str();
  return o;
}

// ---- sharp-interface convergence -----------------------------------------------------------------

Outcome sweep() {
  const Preset p = make_preset("fig1");
  const RegionSpec region{0.05, Epoch::before, reference_for_preset("fig1"), 0.2, true};
  const SweepResult r = epsilon_sweep(p.config, p.initial, {3e-3, 1.5e-3, 8e-4, 4e-4}, region);
  Outcome o;
  Detail d;
  bool all_ok = true;
  for (const auto& e : r.entries) {
    if (!e.report) {
      all_ok = false;
      d << "eps " << e.eps << " failed: " << e.error << "; ";
      continue;
    }
    d << "eps " << e.eps << ": rho " << sci(e.report->sup_rho) << " u " << sci(e.report->sup_u) << " chi "
      << sci(e.report->sup_chi) << "; ";
  }
  const bool chi_small = all_ok && r.entries.back().report->sup_chi < 1e-2;
  o.pass = all_ok && r.rho_monotone && r.u_monotone && chi_small;
  d << "monotone rho " << (r.rho_monotone ? "yes" : "no") << ", u " << (r.u_monotone ? "yes" : "no");
  o.detail = d.str();
  return o;
}

// ---- shock through interface --------------------------------------------------------------------

double exact_fig1_shock_speed() {
  const double g = 1.4;
  const double p = testing::bisect_middle_pressure(g, 1.0, 0.0, 0.125, 0.0);
  const double rho = std::pow(p, 1.0 / g);
  const double u = std::sqrt((p - std::pow(0.125, g)) * (1.0 / 0.125 - 1.0 / rho));
  return rho * u / (rho - 0.125);
}

Outcome shock_through_interface() {
  Outcome o;
  Detail d;
  Preset p = make_preset("fig1");
  p.config.out_times.clear();
  for (int k = 1; k <= 200; ++k) p.config.out_times.push_back(0.001 * k);
  const RunResult r = run(p.config, p.initial);
  const Reference ref = reference_for_preset("fig1");
  auto at = [&](double t) -> const FieldSnapshot& {
    for (const auto& s : r.snapshots) {
      if (std::abs(s.t - t) < 1e-12) return s;
    }
    throw std::runtime_error("no snapshot at the requested time");
  };
  const double exact = exact_fig1_shock_speed();
  const double early = tracked_shock_speed(at(0.03), at(0.05), ref, Family::two);
  const double late = tracked_shock_speed(at(0.15), at(0.2), ref, Family::two);
  const double e_early = std::abs(early - exact) / exact, e_late = std::abs(late - exact) / exact;

  const double dx = p.config.dx();
  double max_jump = 0.0;
  double prev = interface_tracking(r.snapshots.front());
  for (std::size_t k = 1; k < r.snapshots.size(); ++k) {
    const double x = interface_tracking(r.snapshots[k]);
    max_jump = std::max(max_jump, std::abs(x - prev));
    prev = x;
  }
  const bool fig1_ok = e_early <= 0.02 && e_late <= 0.02 && max_jump < 2.0 * dx;
  d << "fig1 shock speed error " << 100 * e_early << "% (t 0.03-0.05), " << 100 * e_late
    << "% (t 0.15-0.2), max interface step " << max_jump / dx << " dx; ";

  const Preset tw = make_preset("two_wave");
  const RunResult rt = run(tw.config, tw.initial);
  bool tw_ok = rt.snapshots.size() == 3;
  if (tw_ok) {
    const auto before = detect_shocks(rt.snapshots[1]);
    const auto after = detect_shocks(rt.snapshots[2]);
    const double iface_before = interface_tracking(rt.snapshots[1]);
    const double iface_after = interface_tracking(rt.snapshots[2]);
    // before: 2-shock left of the 1-shock, closing in; after: 1-shock left of the 2-shock
    tw_ok = before.size() == 2 && after.size() == 2 && before[0].family == Family::two &&
            before[1].family == Family::one && after[0].family == Family::one && after[1].family == Family::two &&
            before[0].position < iface_before && iface_before < before[1].position &&
            after[0].position < iface_after && iface_after < after[1].position;
    d << "two_wave t=0.08: " << before.size() << " shocks";
    for (const auto& s : before) d << " [" << to_string(s.family) << " @ " << s.position << "]";
    d << ", t=0.4: " << after.size() << " shocks";
    for (const auto& s : after) d << " [" << to_string(s.family) << " @ " << s.position << "]";
  }
  o.pass = fig1_ok && tw_ok;
  o.detail = d.str();
  return o;
}

struct Criterion {
  const char* name;
  double max_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"RH/Lax suite", 1.0, rh_lax_suite},
      {"Interaction algebra", 1.0, interaction_algebra},
      {"Profile suite", 30.0, profile_suite},
      {"Shift suite", 5.0, shift_suite},
      {"Solver conservation & maximum principle", 240.0, conservation},
      {"Sharp-interface convergence", 600.0, sweep},
      {"Shock-through-interface", 300.0, shock_through_interface},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.max_seconds) {
      o.pass = false;
      o.detail += " [over the time limit]";
    }
    failures += !o.pass;
    std::printf("%s  %s (%.2f s, limit %.0f s): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, c.max_seconds,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

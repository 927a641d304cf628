#include "nsac/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "ode.hpp"

namespace nsac {

namespace {

constexpr double kShootFraction = 1e-10;   // initial offset from the saddle, relative to strength
constexpr double kEndTolerance = 1e-6;     // end-state residual at the truncation radius, relative
constexpr double kAnchorTolerance = 1e-8;
constexpr std::size_t kMaxSamples = 20000000;

double norm(const Vec2& w) { return std::hypot(w[0], w[1]); }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

// p(v + w) - p(v) without cancellation for small w.
double pressure_increment(const GasLaw& law, double v, double w) {
  return pressure_of_volume(law, v) * std::expm1(-law.gamma() * std::log1p(w / v));
}

struct Normalized {
  Family family;
  double s;
  State left, right;
  double strength;
};

Normalized normalize_wave(const GasLaw& law, const ShockWave& wave) {
  const State l = wave.left.to_lagrangian();
  const State r = wave.right.to_lagrangian();
  double s = wave.speed;
  if (wave.left.frame() == Frame::eulerian) s = (wave.speed - wave.left.u()) / wave.left.v();
  const double delta = norm(sub(r.lagrangian_vector(), l.lagrangian_vector()));
  if (delta > 0.0) {
    const double scale = 1.0 + std::abs(s) + norm(l.lagrangian_vector()) + norm(r.lagrangian_vector());
    if (rh_residual(law, {wave.family, l, r, s}) > 1e-9 * scale) {
      throw AdmissibilityError("compute_profile: end states and speed violate the Rankine-Hugoniot conditions");
    }
    if (!satisfies_lax(law, {wave.family, l, r, s})) {
      throw AdmissibilityError("compute_profile: wave violates the Lax condition");
    }
  }
  return {wave.family, s, l, r, delta};
}

void check_relaxation_speed(const GasLaw& law, const Normalized& w, double a) {
  if (!(a * a - w.s * w.s > 0.0)) {
    std::ostringstream os;
    os << "compute_profile: degenerate profile ODE, a^2 - s^2 = " << a * a - w.s * w.s << " <= 0";
    throw DomainError(os.str());
  }
  const double v_min = std::min(w.left.v(), w.right.v());
  const double c_max = lagrangian_sound_speed(law, v_min);
  if (w.strength > 0.0 && !(a > c_max)) {
    std::ostringstream os;
    os << "compute_profile: a = " << a << " violates the sub-characteristic condition a > " << c_max
       << " on the profile's volume range";
    throw DomainError(os.str());
  }
}

EndStateRates rates_of(const GasLaw& law, const Normalized& w, double a) {
  if (w.strength == 0.0) return {0.0, 0.0};
  const double d = a * a - w.s * w.s;
  const int i = index_of(w.family);
  const double ll = eigenvalues(law, w.left)[i];
  const double lr = eigenvalues(law, w.right)[i];
  return {(ll - w.s) / d, (w.s - lr) / d};
}

}  // namespace

// ---- ShockProfile -----------------------------------------------------------

ShockProfile::ShockProfile(GasLaw law, Family family, double speed, State left, State right, double a,
                           double xi_min, double step, std::vector<Vec2> samples, double shift)
    : law_(law), family_(family), speed_(speed), left_(left), right_(right), a_(a), xi_min_(xi_min),
      step_(step), samples_(std::move(samples)), shift_(shift) {
  if (samples_.size() < 2 || !(step_ > 0.0)) throw DomainError("ShockProfile: need at least two samples and a positive step");
}

double ShockProfile::strength() const noexcept {
  return norm(sub(right_.lagrangian_vector(), left_.lagrangian_vector()));
}

Vec2 ShockProfile::value(double xi) const noexcept {
  const double q = (xi + shift_ - xi_min_) / step_;
  if (!(q > 0.0)) return samples_.front();
  const double last = static_cast<double>(samples_.size() - 1);
  if (q >= last) return samples_.back();
  const auto k = static_cast<std::size_t>(q);
  const double t = q - static_cast<double>(k);
  const Vec2& a = samples_[k];
  const Vec2& b = samples_[k + 1];
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

ShockProfile ShockProfile::with_shift(double shift) const {
  ShockProfile out = *this;
  out.shift_ = shift;
  return out;
}

EndStateRates linearized_end_rates(const GasLaw& law, const ShockWave& wave, double a) {
  const Normalized w = normalize_wave(law, wave);
  check_relaxation_speed(law, w, a);
  return rates_of(law, w, a);
}

// ---- construction -----------------------------------------------------------

ShockProfile compute_profile(const GasLaw& law, const ShockWave& wave, double a, const ProfileOptions& options) {
  const Normalized w = normalize_wave(law, wave);
  check_relaxation_speed(law, w, a);
  const double s = w.s;
  const double d = a * a - s * s;

  if (w.strength == 0.0) {
    const double radius = options.truncation_radius > 0.0 ? options.truncation_radius : 1.0;
    const double step = options.step > 0.0 ? options.step : radius;
    const auto n = static_cast<std::size_t>(std::ceil(radius / step));
    return ShockProfile(law, w.family, s, w.left, w.right, a, -static_cast<double>(n) * step, step,
                        std::vector<Vec2>(2 * n + 1, w.left.lagrangian_vector()));
  }

  const EndStateRates rates = rates_of(law, w, a);
  const double rate_min = std::min(rates.left, rates.right);
  const double rate_max = std::max(rates.left, rates.right);
  const double radius = options.truncation_radius > 0.0 ? options.truncation_radius : 50.0 / rate_min;
  const double h = options.step > 0.0 ? options.step : 0.02 / rate_max;
  const double n_half = std::ceil(radius / h);
  if (!(n_half * 2.0 + 1.0 <= static_cast<double>(kMaxSamples))) {
    throw DomainError("compute_profile: truncation radius / step gives too many samples");
  }
  const auto n = static_cast<std::size_t>(n_half);

  // Family 2: saddle at the left end, integrate in +xi. Family 1: saddle at
  // the right end, integrate in -xi. sigma = dir * xi runs away from the saddle.
  const bool two = w.family == Family::two;
  const double dir = two ? 1.0 : -1.0;
  const State& saddle = two ? w.left : w.right;
  const Vec2 es = saddle.lagrangian_vector();
  const double lambda_s = eigenvalues(law, saddle)[index_of(w.family)];
  const double mu = std::abs(lambda_s - s) / d;  // growth rate in sigma
  const double v_mid = 0.5 * (w.left.v() + w.right.v());

  // Unknown is the deviation W = U - E from an end state E, so step control is
  // relative to the (tiny) distance from that end rather than to |U|. Both
  // ends are equilibria, so the same form holds about either one.
  auto rhs_about = [&](const Vec2& base) {
    return [&, base](double, const Vec2& dev) -> Vec2 {
      const double v = base[0] + dev[0];
      if (!(v > 0.0)) return {NAN, NAN};
      const double g0 = -s * dev[0] - dev[1];
      const double g1 = -s * dev[1] + pressure_increment(law, base[0], dev[0]);
      return {dir * g0 / d, dir * g1 / d};
    };
  };
  const auto rhs = rhs_about(es);
  // Unstable direction of the saddle in sigma: r = (1, -lambda), v moving toward the far end.
  const double far_dv = (two ? w.right.v() : w.left.v()) - es[0];
  Vec2 r{1.0, -lambda_s};
  const double rn = norm(r) * (far_dv > 0.0 ? 1.0 : -1.0);
  const double eta = kShootFraction * w.strength;
  const Vec2 dev0{eta * r[0] / rn, eta * r[1] / rn};

  detail::OdeTolerance tol;
  tol.atol = 1e-300;
  tol.max_step = 0.25 / mu;

  // Pass 1: locate the v-midpoint crossing, sigma_mid.
  const double chunk = 0.25 / mu;
  const double sigma_cap = 400.0 / mu + 4.0 * radius;
  double sigma = 0.0;
  Vec2 dev = dev0;
  double hstep = 0.0;
  auto past = [&](const Vec2& q) { return (es[0] + q[0] - v_mid) * far_dv >= 0.0; };
  while (!past(dev)) {
    if (sigma > sigma_cap) throw NumericalError("compute_profile: orbit from the saddle never reaches the midpoint volume");
    const Vec2 next = detail::dopri5<2>(rhs, dev, sigma, sigma + chunk, hstep, tol);
    if (past(next)) {
      double lo = 0.0, hi = chunk;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (sigma + chunk); ++it) {
        const double m = 0.5 * (lo + hi);
        double hh = 0.0;
        (past(detail::dopri5<2>(rhs, dev, sigma, sigma + m, hh, tol)) ? hi : lo) = m;
      }
      sigma += 0.5 * (lo + hi);
      break;
    }
    dev = next;
    sigma += chunk;
  }
  const double sigma_mid = sigma;

  // Pass 2: samples at sigma_mid + k h for k = -n..n. Points before the
  // shooting start follow the linearized solution. Past the midpoint the
  // deviation is taken from the far end instead.
  const Vec2 ef = (two ? w.right : w.left).lagrangian_vector();
  const auto rhs_far = rhs_about(ef);
  std::vector<Vec2> out(2 * n + 1);
  dev = dev0;
  sigma = 0.0;
  hstep = 0.0;
  bool far = false;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double sj = sigma_mid + (static_cast<double>(j) - n_half) * h;
    if (sj <= 0.0) {
      const double f = std::exp(mu * sj);
      out[j] = {es[0] + dev0[0] * f, es[1] + dev0[1] * f};
      continue;
    }
    if (!far && sj > sigma_mid) {
      if (sigma < sigma_mid) dev = detail::dopri5<2>(rhs, dev, sigma, sigma_mid, hstep, tol);
      sigma = std::max(sigma, sigma_mid);
      dev = {es[0] + dev[0] - ef[0], es[1] + dev[1] - ef[1]};
      far = true;
    }
    dev = far ? detail::dopri5<2>(rhs_far, dev, sigma, sj, hstep, tol) : detail::dopri5<2>(rhs, dev, sigma, sj, hstep, tol);
    sigma = sj;
    const Vec2& base = far ? ef : es;
    out[j] = {base[0] + dev[0], base[1] + dev[1]};
  }
  if (!two) std::reverse(out.begin(), out.end());
  const double xi_min = -n_half * h;

  const double res_l = norm(sub(out.front(), w.left.lagrangian_vector()));
  const double res_r = norm(sub(out.back(), w.right.lagrangian_vector()));
  if (std::max(res_l, res_r) > kEndTolerance * w.strength) {
    std::ostringstream os;
    os << "compute_profile: truncation radius too small, end-state residual " << std::max(res_l, res_r)
       << " exceeds " << kEndTolerance * w.strength;
    throw NumericalError(os.str());
  }
  return ShockProfile(law, w.family, s, w.left, w.right, a, xi_min, h, std::move(out));
}

// ---- diagnostics ------------------------------------------------------------

namespace {

// Least-squares slope of log|U - E| against xi over samples in the window
// [1e-8, 1e-3] * strength.
double fitted_slope(const ShockProfile& p, const Vec2& end, bool right_tail) {
  const double delta = p.strength();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double xi = p.xi(k);
    if (right_tail ? xi < 0.0 : xi > 0.0) continue;
    const double e = norm(sub(p.sample(k), end));
    if (e < 1e-8 * delta || e > 1e-3 * delta) continue;
    const double y = std::log(e);
    sx += xi;
    sy += y;
    sxx += xi * xi;
    sxy += xi * y;
    ++m;
  }
  if (m < 3) return 0.0;
  const double den = m * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (m * sxy - sx * sy) / den;
}

}  // namespace

ProfileDiagnostics diagnose_profile(const ShockProfile& p) {
  ProfileDiagnostics out;
  const GasLaw& law = p.law();
  const double s = p.speed();
  const double d = p.a() * p.a() - s * s;
  const Vec2 ul = p.left().lagrangian_vector();
  const Vec2 ur = p.right().lagrangian_vector();
  const Vec2 fl = lagrangian_flux(law, ul);
  const double h = p.step();
  const std::size_t n = p.size();
  const double delta = p.strength();

  for (std::size_t k = 2; k + 2 < n; ++k) {
    const Vec2 fu = lagrangian_flux(law, p.sample(k));
    for (int c = 0; c < 2; ++c) {
      const double du = (-p.sample(k + 2)[c] + 8.0 * p.sample(k + 1)[c] - 8.0 * p.sample(k - 1)[c] +
                         p.sample(k - 2)[c]) / (12.0 * h);
      const double g = -s * (p.sample(k)[c] - ul[c]) + fu[c] - fl[c];
      out.ode_residual = std::max(out.ode_residual, std::abs(d * du - g));
    }
  }
  out.end_residual_left = norm(sub(p.sample(0), ul));
  out.end_residual_right = norm(sub(p.sample(n - 1), ur));
  const Vec2 mid = p.with_shift(0.0).value(0.0);
  out.midpoint_v_error = std::abs(mid[0] - 0.5 * (ul[0] + ur[0]));
  out.midpoint_u_offset = mid[1] - 0.5 * (ul[1] + ur[1]);

  const int fam = index_of(p.family());
  auto lambda = [&](const Vec2& w) { return eigenvalues(law, State::lagrangian(w[0], w[1]))[fam]; };
  // A sample is resolvable when it differs from both end states by more than
  // the rounding noise of the end state itself.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::max(norm(ul), norm(ur)));
  auto resolvable = [&](const Vec2& w) { return norm(sub(w, ul)) > noise && norm(sub(w, ur)) > noise; };
  double ratio_min = INFINITY, ratio_max = 0.0;
  double tv_v = 0.0, tv_u = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool rk = resolvable(p.sample(k));
    if (rk) ++out.resolvable_samples;
    if (k + 1 == n) break;
    const Vec2& a = p.sample(k);
    const Vec2& b = p.sample(k + 1);
    tv_v += std::abs(b[0] - a[0]);
    tv_u += std::abs(b[1] - a[1]);
    const double la = lambda(a), lb = lambda(b);
    if (rk && resolvable(b)) {
      if (!(lb < la)) out.eigenvalue_monotone = false;
      const double du = norm(sub(b, a));
      if (du > 0.0) {
        const double ratio = std::abs(lb - la) / du;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
      }
    } else if (lb > la + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(la)) {
      out.eigenvalue_monotone = false;
    }
  }
  if (ratio_max > 0.0) out.comparability_constant = std::max(ratio_max, 1.0 / ratio_min);
  out.tv_excess_v = tv_v - std::abs(ur[0] - ul[0]);
  out.tv_excess_u = tv_u - std::abs(ur[1] - ul[1]);
  if (delta > 0.0) {
    out.decay_rate_left = fitted_slope(p, ul, false);
    out.decay_rate_right = -fitted_slope(p, ur, true);
  }
  return out;
}

// ---- superposition ------------------------------------------------------------

Vec2 SuperposedProfile::value(double y, double tau) const noexcept {
  const Vec2 a = p1_.value(y - p1_.speed() * tau);
  const Vec2 b = p2_.value(y - p2_.speed() * tau);
  const Vec2 c = anchor_.lagrangian_vector();
  return {a[0] + b[0] - c[0], a[1] + b[1] - c[1]};
}

SuperposedProfile SuperposedProfile::shifted(double b1, double b2) const {
  return {p1_.with_shift(p1_.shift() + b1), p2_.with_shift(p2_.shift() + b2), anchor_};
}

SuperposedProfile superpose(const ShockProfile& p1, const ShockProfile& p2, const State& anchor) {
  if (p1.family() != Family::one || p2.family() != Family::two) {
    throw ConfigError("superpose: expected a 1-profile and a 2-profile");
  }
  const Vec2 c = anchor.lagrangian_vector();
  auto near = [&](const State& st) { return norm(sub(st.lagrangian_vector(), c)) <= kAnchorTolerance; };
  const bool before = near(p1.left()) && near(p2.right());
  const bool after = near(p1.right()) && near(p2.left());
  if (!before && !after) {
    throw ConfigError("superpose: profile end states do not match the anchor state");
  }
  return {p1, p2, anchor.to_lagrangian()};
}

SampledField sample_superposition(const SuperposedProfile& sp, double tau, double y_lo, double y_hi,
                                  std::size_t n) {
  if (n < 2 || !(y_hi > y_lo)) throw DomainError("sample_superposition: need n >= 2 and y_hi > y_lo");
  SampledField f;
  f.y.resize(n);
  f.values.resize(n);
  const double dy = (y_hi - y_lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    f.y[k] = k + 1 == n ? y_hi : y_lo + dy * static_cast<double>(k);
    f.values[k] = sp.value(f.y[k], tau);
  }
  return f;
}

Vec2 mass_difference(const SampledField& field, const SuperposedProfile& sp, double tau) {
  if (field.y.size() != field.values.size() || field.y.size() < 2) {
    throw DomainError("mass_difference: field needs matching y/value arrays with at least two points");
  }
  Vec2 acc{0.0, 0.0};
  Vec2 prev = sub(field.values[0], sp.value(field.y[0], tau));
  for (std::size_t k = 1; k < field.y.size(); ++k) {
    const Vec2 cur = sub(field.values[k], sp.value(field.y[k], tau));
    const double w = 0.5 * (field.y[k] - field.y[k - 1]);
    acc[0] += w * (prev[0] + cur[0]);
    acc[1] += w * (prev[1] + cur[1]);
    prev = cur;
  }
  return acc;
}

Shifts compute_shifts(const SampledField& field, const SuperposedProfile& outgoing, const State& u_minus,
                      const State& u_plus) {
  const Vec2 star = outgoing.anchor().lagrangian_vector();
  const Vec2 nu1 = sub(star, u_minus.lagrangian_vector());
  const Vec2 nu2 = sub(u_plus.lagrangian_vector(), star);
  const double det = nu1[0] * nu2[1] - nu1[1] * nu2[0];
  if (!(std::abs(det) >= 1e-12 * norm(nu1) * norm(nu2)) || det == 0.0) {
    throw NumericalError("compute_shifts: singular configuration, nu1 and nu2 are parallel");
  }
  // Solve b1 nu1 + b2 nu2 = rhs by Cramer's rule.
  auto solve = [&](const Vec2& rhs) -> Vec2 {
    return {(rhs[0] * nu2[1] - rhs[1] * nu2[0]) / det, (nu1[0] * rhs[1] - nu1[1] * rhs[0]) / det};
  };

  Shifts out;
  out.initial_mass = mass_difference(field, outgoing);
  const double target = 1e-8 * (1.0 + norm(out.initial_mass));
  Vec2 res = out.initial_mass;
  // dI/db_i = -nu_i on the whole line; the corrector passes absorb the
  // difference made by the finite grid.
  for (int it = 0; it < 50 && norm(res) > 0.1 * target; ++it) {
    const Vec2 db = solve(res);
    out.b1 += db[0];
    out.b2 += db[1];
    res = mass_difference(field, outgoing.shifted(out.b1, out.b2));
  }
  out.residual = res;
  if (!(norm(res) <= target)) {
    std::ostringstream os;
    os << "compute_shifts: mass residual " << norm(res) << " above " << target
       << " (perturbation not integrable on the given grid?)";
    throw NumericalError(os.str());
  }
  return out;
}

double h2_difference(const SuperposedProfile& a, const SuperposedProfile& b, double tau, double y_lo,
                     double y_hi, std::size_t n) {
  if (n < 3 || !(y_hi > y_lo)) throw DomainError("h2_difference: need n >= 3 and y_hi > y_lo");
  const double h = (y_hi - y_lo) / static_cast<double>(n - 1);
  std::vector<Vec2> diff(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = y_lo + h * static_cast<double>(k);
    diff[k] = sub(a.value(y, tau), b.value(y, tau));
  }
  double acc = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    for (int c = 0; c < 2; ++c) {
      const double d0 = diff[k][c];
      const double d1 = (diff[k + 1][c] - diff[k - 1][c]) / (2.0 * h);
      const double d2 = (diff[k + 1][c] - 2.0 * diff[k][c] + diff[k - 1][c]) / (h * h);
      acc += (d0 * d0 + d1 * d1 + d2 * d2) * h;
    }
  }
  return std::sqrt(acc);
}

FanProfiles compute_fan_profiles(const WaveFan& fan, double a, const ProfileOptions& options) {
  if (fan.frame != Frame::lagrangian) throw DomainError("compute_fan_profiles: fan must be in the Lagrangian frame");
  auto job = [&](ShockWave w) { return std::async(std::launch::async, [&, w] { return compute_profile(fan.law, w, a, options); }); };
  auto i1 = job(fan.incoming_1());
  auto i2 = job(fan.incoming_2());
  auto o1 = job(fan.outgoing_1());
  auto o2 = job(fan.outgoing_2());
  ShockProfile pi1 = i1.get(), pi2 = i2.get(), po1 = o1.get(), po2 = o2.get();
  return {superpose(pi1, pi2, fan.star), superpose(po1, po2, fan.post_star)};
}

}  // namespace nsac

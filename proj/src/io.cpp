#include "nsac/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace nsac {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  const double d = parse_number(text, what);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(what + ": expected an integer, got '" + text + "'");
  return static_cast<int>(d);
}

std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
  return s;
}

void kv(std::ostream& out, const std::string& key, double value) { out << key << " = " << format_number(value) << '\n'; }

void kv(std::ostream& out, const std::string& key, const std::string& value) { out << key << " = " << value << '\n'; }

void state_kv(std::ostream& out, const std::string& name, const State& s) {
  kv(out, name + ".v", s.v());
  kv(out, name + ".u", s.u());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  return f;
}

void check_written(std::ostream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ConfigError(what + ": not a finite number: '" + text + "'");
  }
  return value;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_number(item, what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read '" + path.string() + "'");
  return parse_key_values(f, path.string());
}

std::vector<std::string> apply_solver_config(SolverConfig& c, const KeyValues& values) {
  std::vector<std::string> unused;
  for (const auto& [key, value] : values) {
    const std::string what = "config key '" + key + "'";
    if (key == "gamma") c.gamma = parse_number(value, what);
    else if (key == "eps") c.eps = parse_number(value, what);
    else if (key == "a") c.a = parse_number(value, what);
    else if (key == "a_margin") c.a_margin = parse_number(value, what);
    else if (key == "x_lo") c.x_lo = parse_number(value, what);
    else if (key == "x_hi") c.x_hi = parse_number(value, what);
    else if (key == "n_cells") c.n_cells = parse_int(value, what);
    else if (key == "cfl") c.cfl = parse_number(value, what);
    else if (key == "t_end") c.t_end = parse_number(value, what);
    else if (key == "out_times") c.out_times = value.empty() ? std::vector<double>{} : parse_number_list(value, what);
    else if (key == "mobility_const") c.mobility_const = parse_number(value, what);
    else if (key == "stabilizer") c.stabilizer = parse_number(value, what);
    else if (key == "order") c.order = parse_int(value, what);
    else if (key == "preset") c.preset = value;
    else if (key == "markers") c.markers = value.empty() ? std::vector<double>{} : parse_number_list(value, what);
    else if (key == "boundary") {
      if (value != "outflow") throw ConfigError(what + ": only 'outflow' is supported");
    } else if (key == "limiter") {
      if (value != "minmod") throw ConfigError(what + ": only 'minmod' is supported");
    } else if (key != "dx") {
      unused.push_back(key);
    }
  }
  if (const auto it = values.find("dx"); it != values.end()) {
    const double dx = parse_number(it->second, "config key 'dx'");
    if (!(dx > 0.0)) throw ConfigError("config key 'dx': must be positive");
    const double cells = (c.x_hi - c.x_lo) / dx;
    const double n = std::round(cells);
    if (std::abs(cells - n) > 1e-9 * cells || n < 1.0 || n > 1e9) {
      throw ConfigError("config key 'dx': " + it->second + " does not divide the domain into whole cells");
    }
    c.n_cells = static_cast<int>(n);
  }
  return unused;
}

void write_solver_config(std::ostream& out, const SolverConfig& c) {
  kv(out, "preset", c.preset);
  kv(out, "gamma", c.gamma);
  kv(out, "eps", c.eps);
  kv(out, "a", c.a);
  kv(out, "a_margin", c.a_margin);
  kv(out, "x_lo", c.x_lo);
  kv(out, "x_hi", c.x_hi);
  kv(out, "n_cells", std::to_string(c.n_cells));
  kv(out, "dx", c.dx());
  kv(out, "cfl", c.cfl);
  kv(out, "t_end", c.t_end);
  kv(out, "out_times", join_numbers(c.out_times));
  kv(out, "mobility_const", c.mobility_const);
  kv(out, "stabilizer", c.stabilizer);
  kv(out, "boundary", "outflow");
  kv(out, "order", std::to_string(c.order));
  kv(out, "limiter", "minmod");
  kv(out, "markers", join_numbers(c.markers));
}

std::string snapshot_filename(const std::string& run, double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", t);
  return run + "_t" + buf + ".csv";
}

void write_snapshot_csv(std::ostream& out, const FieldSnapshot& s) {
  out << "x,rho,u,chi\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_number(s.x[i]) << ',' << format_number(s.rho[i]) << ',' << format_number(s.m[i] / s.rho[i]) << ','
        << format_number(s.chi[i]) << '\n';
  }
}

void write_snapshot_csv(const std::filesystem::path& path, const FieldSnapshot& s) {
  std::ofstream f = open_out(path);
  write_snapshot_csv(f, s);
  check_written(f, path);
}

FieldSnapshot read_snapshot_csv(const std::filesystem::path& path, double t) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(f, line) || trim(line) != "x,rho,u,chi") {
    throw IoError(path.string() + ": expected header 'x,rho,u,chi'");
  }
  FieldSnapshot s;
  s.t = t;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 4) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
    double v[4];
    try {
      for (int k = 0; k < 4; ++k) v[k] = parse_number(cols[k], "column");
    } catch (const ConfigError&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
    s.x.push_back(v[0]);
    s.rho.push_back(v[1]);
    s.m.push_back(v[1] * v[2]);
    s.chi.push_back(v[3]);
    s.v_aux.push_back({0.0, 0.0});
  }
  return s;
}

void write_run_meta(std::ostream& out, const std::string& run, const RunResult& r) {
  out << "# run metadata\n";
  kv(out, "run", run);
  write_solver_config(out, r.config);
  kv(out, "steps", std::to_string(r.steps));
  kv(out, "max_chi_overshoot", r.max_chi_overshoot);
  kv(out, "max_wave_speed", r.max_wave_speed);
  kv(out, "effective_viscosity", r.effective_viscosity);
  kv(out, "wall_seconds", r.wall_seconds);
  kv(out, "outputs", std::to_string(r.ledgers.size()));
  for (std::size_t k = 0; k < r.ledgers.size(); ++k) {
    const ConservationLedger& l = r.ledgers[k];
    const std::string p = "ledger." + std::to_string(k) + ".";
    kv(out, p + "t", l.t);
    kv(out, p + "mass", l.mass);
    kv(out, p + "momentum", l.momentum);
    kv(out, p + "inflow_mass", l.inflow_mass);
    kv(out, p + "inflow_momentum", l.inflow_momentum);
    kv(out, p + "mass_defect", l.mass_defect());
    kv(out, p + "momentum_defect", l.momentum_defect(r.config.a));
    if (k < r.marker_positions.size() && !r.marker_positions[k].empty()) {
      kv(out, p + "markers", join_numbers(r.marker_positions[k]));
    }
  }
  kv(out, "mass0", r.ledgers.empty() ? 0.0 : r.ledgers.front().mass0);
  kv(out, "momentum0", r.ledgers.empty() ? 0.0 : r.ledgers.front().momentum0);
}

std::vector<std::filesystem::path> write_run(const std::filesystem::path& dir, const std::string& run,
                                             const RunResult& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (std::size_t k = 1; k < r.snapshots.size(); ++k) {
    const auto path = dir / snapshot_filename(run, r.snapshots[k].t);
    write_snapshot_csv(path, r.snapshots[k]);
    written.push_back(path);
  }
  const auto meta = dir / (run + "_meta.txt");
  std::ofstream f = open_out(meta);
  write_run_meta(f, run, r);
  check_written(f, meta);
  written.push_back(meta);
  return written;
}

void write_fan(std::ostream& out, const WaveFan& f) {
  out << "# wave fan\n";
  kv(out, "gamma", f.law.gamma());
  kv(out, "frame", f.frame == Frame::lagrangian ? "lagrangian" : "eulerian");
  state_kv(out, "minus", f.minus);
  state_kv(out, "star", f.star);
  state_kv(out, "plus", f.plus);
  kv(out, "s1", f.s1);
  kv(out, "s2", f.s2);
  kv(out, "x_left", f.x_left);
  kv(out, "x_right", f.x_right);
  kv(out, "x0", f.x0);
  kv(out, "t0", f.t0);
  state_kv(out, "post_star", f.post_star);
  kv(out, "post_s1", f.post_s1);
  kv(out, "post_s2", f.post_s2);
  kv(out, "strength.incoming1", f.strengths.incoming1);
  kv(out, "strength.incoming2", f.strengths.incoming2);
  kv(out, "strength.outgoing1", f.strengths.outgoing1);
  kv(out, "strength.outgoing2", f.strengths.outgoing2);
  kv(out, "strength.min_incoming", f.strengths.min_incoming);
}

WaveFan read_fan(std::istream& in, const std::string& source) {
  const KeyValues values = parse_key_values(in, source);
  auto num = [&](const std::string& key) {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError(source + ": missing key '" + key + "'");
    return parse_number(it->second, source + " key '" + key + "'");
  };
  const auto fr = values.find("frame");
  if (fr == values.end() || (fr->second != "lagrangian" && fr->second != "eulerian")) {
    throw ConfigError(source + ": frame must be 'lagrangian' or 'eulerian'");
  }
  const bool lag = fr->second == "lagrangian";
  auto state = [&](const std::string& name) {
    const double v = num(name + ".v");
    const double u = num(name + ".u");
    if (!(v > 0.0)) throw ConfigError(source + ": " + name + ".v must be positive");
    return lag ? State::lagrangian(v, u) : State::eulerian(1.0 / v, u);
  };
  WaveFan f;
  f.law = GasLaw(num("gamma"));
  f.frame = lag ? Frame::lagrangian : Frame::eulerian;
  f.minus = state("minus");
  f.star = state("star");
  f.plus = state("plus");
  f.s1 = num("s1");
  f.s2 = num("s2");
  f.x_left = num("x_left");
  f.x_right = num("x_right");
  f.x0 = num("x0");
  f.t0 = num("t0");
  f.post_star = state("post_star");
  f.post_s1 = num("post_s1");
  f.post_s2 = num("post_s2");
  f.strengths.incoming1 = num("strength.incoming1");
  f.strengths.incoming2 = num("strength.incoming2");
  f.strengths.outgoing1 = num("strength.outgoing1");
  f.strengths.outgoing2 = num("strength.outgoing2");
  f.strengths.min_incoming = num("strength.min_incoming");
  return f;
}

void write_riemann(std::ostream& out, const RiemannSolution& s) {
  out << "# riemann solution\n";
  kv(out, "gamma", s.law().gamma());
  kv(out, "frame", s.frame() == Frame::lagrangian ? "lagrangian" : "eulerian");
  state_kv(out, "left", s.left());
  state_kv(out, "middle", s.middle());
  state_kv(out, "right", s.right());
  for (Family fam : {Family::one, Family::two}) {
    const Wave& w = s.wave(fam);
    const std::string p = "wave" + std::to_string(static_cast<int>(fam)) + ".";
    kv(out, p + "kind", to_string(w.kind));
    kv(out, p + "slowest", w.slowest);
    kv(out, p + "fastest", w.fastest);
  }
}

void write_profile_csv(std::ostream& out, const ShockProfile& p) {
  out << "xi,v,u,lambda_family\n";
  const int idx = index_of(p.family());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vec2& w = p.sample(k);
    const double lambda = eigenvalues(p.law(), State::lagrangian(w[0], w[1]))[idx];
    out << format_number(p.xi(k) - p.shift()) << ',' << format_number(w[0]) << ',' << format_number(w[1]) << ','
        << format_number(lambda) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "eps,sup_rho,sup_u,sup_chi,cells_used,cells_used_chi,wall_seconds,status\n";
  for (const SweepEntry& e : r.entries) {
    out << format_number(e.eps) << ',';
    if (e.report) {
      out << format_number(e.report->sup_rho) << ',' << format_number(e.report->sup_u) << ','
          << format_number(e.report->sup_chi) << ',' << e.report->cells_used << ',' << e.report->cells_used_chi << ',';
    } else {
      out << "nan,nan,nan,0,0,";
    }
    std::string status = e.report ? "ok" : e.error;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    out << format_number(e.wall_seconds) << ',' << status << '\n';
  }
}

void write_sweep_summary(std::ostream& out, const SweepResult& r, const RegionSpec& region) {
  out << "# sweep summary\n";
  kv(out, "h", region.h);
  kv(out, "t", region.t);
  kv(out, "epoch", region.epoch == Epoch::before ? "before" : "after");
  kv(out, "mask_interface", region.mask_interface ? "true" : "false");
  kv(out, "runs", std::to_string(r.entries.size()));
  kv(out, "rho_monotone", r.rho_monotone ? "true" : "false");
  kv(out, "u_monotone", r.u_monotone ? "true" : "false");
  kv(out, "chi_monotone", r.chi_monotone ? "true" : "false");
  kv(out, "verdict", r.monotone ? "monotone" : "not monotone");
}

}  // namespace nsac

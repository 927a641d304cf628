#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nsac/io.hpp"
#include "support.hpp"

using namespace nsac;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("nsac_io_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("io: numbers round-trip at 17 significant digits") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(parse_number(format_number(x), "x") == x);
  }
  CHECK(parse_number(" 4e-4 ", "x") == 4e-4);
  CHECK(parse_number("+1.5", "x") == 1.5);
  CHECK_THROWS_AS(parse_number("1.5x", "x"), ConfigError);
  CHECK_THROWS_AS(parse_number("", "x"), ConfigError);
  CHECK_THROWS_AS(parse_number("inf", "x"), ConfigError);
  CHECK(parse_number_list("3e-3, 1.5e-3,8e-4", "l") == std::vector<double>{3e-3, 1.5e-3, 8e-4});
  CHECK_THROWS_AS(parse_number_list("1,,2", "l"), ConfigError);
}

TEST_CASE("io: key-value parsing") {
  std::istringstream in("# comment\n eps = 1e-3  # trailing\n\npreset=fig1\nout_times = 0.1, 0.2\n");
  const KeyValues kv = parse_key_values(in, "cfg");
  CHECK(kv.size() == 3);
  CHECK(kv.at("eps") == "1e-3");
  CHECK(kv.at("preset") == "fig1");
  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_AS(parse_key_values(dup, "cfg"), ConfigError);
  std::istringstream bad("just words\n");
  CHECK_THROWS_WITH_AS(parse_key_values(bad, "cfg"), doctest::Contains("cfg:1"), ConfigError);
  CHECK_THROWS_AS(read_key_values("/nonexistent/nsac.cfg"), IoError);
}

TEST_CASE("io: solver config application and echo") {
  SolverConfig c;
  const KeyValues kv{{"eps", "1e-3"}, {"dx", "0.002"}, {"x_hi", "2"}, {"out_times", "0.1,0.2"},
                     {"order", "1"}, {"h", "0.05"}};
  const auto unused = apply_solver_config(c, kv);
  CHECK(unused == std::vector<std::string>{"h"});
  CHECK(c.eps == 1e-3);
  CHECK(c.n_cells == 1000);
  CHECK(c.order == 1);
  CHECK(c.out_times.size() == 2);
  CHECK_THROWS_AS(apply_solver_config(c, {{"dx", "0.0013"}}), ConfigError);
  CHECK_THROWS_AS(apply_solver_config(c, {{"order", "1.5"}}), ConfigError);
  CHECK_THROWS_AS(apply_solver_config(c, {{"boundary", "periodic"}}), ConfigError);

  std::stringstream echo;
  write_solver_config(echo, c);
  SolverConfig back;
  const auto rest = apply_solver_config(back, parse_key_values(echo, "echo"));
  CHECK(rest.empty());
  CHECK(back.eps == c.eps);
  CHECK(back.n_cells == c.n_cells);
  CHECK(back.x_hi == c.x_hi);
  CHECK(back.out_times == c.out_times);
  CHECK(back.order == c.order);
}

TEST_CASE("io: snapshot CSV round trip and run files") {
  Preset p = make_preset("fig1");
  p.config.n_cells = 64;
  p.config.out_times = {0.05, 0.1};
  p.config.t_end = 0.1;
  p.initial = preset_initial_data("fig1", p.config);
  const RunResult r = run(p.config, p.initial);
  const fs::path dir = scratch_dir("run");
  const auto files = write_run(dir / "out", "fig1", r);
  REQUIRE(files.size() == 3);
  CHECK(files[0].filename() == "fig1_t0.05.csv");
  CHECK(files[1].filename() == "fig1_t0.1.csv");
  CHECK(files[2].filename() == "fig1_meta.txt");

  const FieldSnapshot back = read_snapshot_csv(files[1], 0.1);
  const FieldSnapshot& s = r.snapshots.back();
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.x[i] == s.x[i]);
    CHECK(back.rho[i] == s.rho[i]);
    CHECK(back.chi[i] == s.chi[i]);
    CHECK(back.m[i] == doctest::Approx(s.m[i]).epsilon(1e-15));
  }

  const KeyValues meta = read_key_values(files[2]);
  CHECK(meta.at("run") == "fig1");
  CHECK(parse_number(meta.at("eps"), "eps") == p.config.eps);
  CHECK(parse_number(meta.at("a"), "a") == r.config.a);
  CHECK(meta.count("wall_seconds") == 1);
  CHECK(meta.count("ledger.2.mass_defect") == 1);

  std::ofstream(dir / "extra.csv") << "x,rho,u,chi,p\n0,1,0,1,1\n";
  CHECK_THROWS_WITH_AS(read_snapshot_csv(dir / "extra.csv"), doctest::Contains("extra.csv"), IoError);
  std::ofstream(dir / "short.csv") << "x,rho,u,chi\n0,1,0\n";
  CHECK_THROWS_AS(read_snapshot_csv(dir / "short.csv"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("io: fan serialization round trip") {
  const GasLaw law(1.4);
  const auto planted = testing::plant_fan(law, State::lagrangian(0.8, 0.1), 0.1, 0.15);
  const WaveFan f = solve_two_shock(law, planted.minus, planted.plus, 0.5, 1.0);
  std::stringstream text;
  write_fan(text, f);
  const WaveFan g = read_fan(text, "fan");
  CHECK(g.law.gamma() == 1.4);
  CHECK(g.frame == Frame::lagrangian);
  CHECK(g.star.v() == f.star.v());
  CHECK(g.star.u() == f.star.u());
  CHECK(g.post_star.v() == f.post_star.v());
  CHECK(g.s1 == f.s1);
  CHECK(g.post_s2 == f.post_s2);
  CHECK(g.x0 == f.x0);
  CHECK(g.t0 == f.t0);
  CHECK(g.strengths.outgoing2 == f.strengths.outgoing2);

  const WaveFan e = to_eulerian(f);
  std::stringstream etext;
  write_fan(etext, e);
  const WaveFan h = read_fan(etext, "fan");
  CHECK(h.frame == Frame::eulerian);
  CHECK(h.minus.rho() == doctest::Approx(e.minus.rho()).epsilon(1e-15));
  std::istringstream missing("gamma = 1.4\nframe = lagrangian\n");
  CHECK_THROWS_AS(read_fan(missing, "fan"), ConfigError);
}

TEST_CASE("io: riemann and profile output") {
  const GasLaw law(1.4);
  std::stringstream r;
  write_riemann(r, solve_riemann_general(law, State::eulerian(1.0, 0.0), State::eulerian(0.125, 0.0)));
  const KeyValues kv = parse_key_values(r, "riemann");
  CHECK(kv.at("wave1.kind") == "rarefaction");
  CHECK(kv.at("wave2.kind") == "shock");

  const ShockWave w = hugoniot_locus(law, State::lagrangian(1.0, 0.0), Family::two, 0.8);
  const ShockProfile p = compute_profile(law, w, 1.2 * lagrangian_sound_speed(law, 0.8));
  std::stringstream csv;
  write_profile_csv(csv, p);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "xi,v,u,lambda_family");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::stringstream ls(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ls, cell, ',')) {
      parse_number(cell, "cell");
      ++cols;
    }
    CHECK(cols == 4);
  }
  CHECK(rows == p.size());
}

TEST_CASE("io: sweep report") {
  SweepResult r;
  SweepEntry ok{1e-3, ErrorReport{1e-3, 0.1, 0.2, 0.0, 10, 8}, "", 1.0};
  SweepEntry failed{5e-4, std::nullopt, "step: sub-characteristic condition violated, a = 2", 0.5};
  r.entries = {ok, failed};
  std::stringstream csv;
  write_sweep_csv(csv, r);
  std::string header, row1, row2;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  CHECK(header == "eps,sup_rho,sup_u,sup_chi,cells_used,cells_used_chi,wall_seconds,status");
  CHECK(row1.substr(row1.size() - 3) == ",ok");
  CHECK(std::count(row2.begin(), row2.end(), ',') == 7);
  std::stringstream summary;
  write_sweep_summary(summary, r, RegionSpec{0.05, Epoch::before, reference_for_preset("fig1"), 0.2, true});
  CHECK(parse_key_values(summary, "s").at("verdict") == "not monotone");
}

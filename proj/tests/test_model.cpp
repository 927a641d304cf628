#include <cmath>
#include <random>

#include "doctest.h"
#include "nsac/model.hpp"

using namespace nsac;

namespace {

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

}  // namespace

TEST_CASE("gas law rejects gamma <= 1") {
  CHECK_THROWS_AS(GasLaw(1.0), DomainError);
  CHECK_THROWS_AS(GasLaw(0.5), DomainError);
  CHECK(GasLaw(1.4).gas_constant() == 1.0);
}

TEST_CASE("pressure in both frames") {
  const GasLaw law(1.4);
  CHECK(pressure(law, State::lagrangian(1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  const double expected = std::exp(1.4 * std::log(0.125));
  CHECK(pressure(law, State::eulerian(0.125, 0.0)) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(pressure(law, State::eulerian(0.125, 0.0)) == doctest::Approx(0.0544).epsilon(1e-3));
  CHECK(pressure(GasLaw(2.0), State::lagrangian(2.0, 0.0)) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(State::lagrangian(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(State::eulerian(-1.0, 0.0), DomainError);
  CHECK_THROWS_AS(pressure_of_volume(law, -0.1), DomainError);
}

TEST_CASE("frame consistency of the pressure law") {
  const GasLaw law(1.4);
  for (double v = 0.05; v < 20.0; v *= 1.37) {
    const double pl = pressure(law, State::lagrangian(v, 0.0));
    const double pe = pressure(law, State::eulerian(1.0 / v, 0.0));
    CHECK(std::abs(pl - pe) <= 1e-14 * pl);
  }
}

TEST_CASE("eigenvalues") {
  const GasLaw law(1.4);
  const Vec2 l = eigenvalues(law, State::lagrangian(1.0, 0.0));
  CHECK(l[1] == doctest::Approx(std::sqrt(1.4)).epsilon(1e-15));
  CHECK(l[1] == doctest::Approx(1.1832).epsilon(1e-4));
  CHECK(l[0] + l[1] == 0.0);
  CHECK(eigenvalues(GasLaw(2.0), State::lagrangian(1.0, 0.3))[1] == doctest::Approx(std::sqrt(2.0)));

  double prev = INFINITY;
  for (double v = 0.1; v < 10.0; v += 0.05) {
    const Vec2 e = eigenvalues(law, State::lagrangian(v, 0.0));
    CHECK(e[0] < 0.0);
    CHECK(e[1] > 0.0);
    CHECK(e[1] < prev);
    prev = e[1];
  }
}

TEST_CASE("eigenvectors diagonalize the flux Jacobian") {
  const GasLaw law(1.4);
  SUBCASE("unit state") {
    const State s = State::lagrangian(1.0, 0.0);
    const Eigensystem e = eigenvectors(law, s);
    const Mat2 lfr = mul(mul(e.left, lagrangian_jacobian(law, s)), e.right);
    CHECK(lfr[0][0] == doctest::Approx(-std::sqrt(1.4)).epsilon(1e-14));
    CHECK(lfr[1][1] == doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
    CHECK(std::abs(lfr[0][1]) < 1e-14);
    CHECK(std::abs(lfr[1][0]) < 1e-14);
  }
  SUBCASE("perturbed state") {
    const State s = State::lagrangian(1.1, 0.2);
    const Eigensystem e = eigenvectors(law, s);
    const Mat2 lfr = mul(mul(e.left, lagrangian_jacobian(law, s)), e.right);
    CHECK(std::abs(lfr[0][1]) < 1e-10);
    CHECK(std::abs(lfr[1][0]) < 1e-10);
  }
  SUBCASE("random admissible states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> vdist(0.05, 10.0), udist(-5.0, 5.0), gdist(1.05, 3.0);
    for (int k = 0; k < 100; ++k) {
      const GasLaw g(gdist(rng));
      const State s = State::lagrangian(vdist(rng), udist(rng));
      const Eigensystem e = eigenvectors(g, s);
      const Mat2 lr = mul(e.left, e.right);
      const Mat2 lfr = mul(mul(e.left, lagrangian_jacobian(g, s)), e.right);
      const double scale = 1.0 + std::abs(e.lambda[1]);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          CHECK(std::abs(lr[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-12);
          CHECK(std::abs(lfr[i][j] - (i == j ? e.lambda[i] : 0.0)) <= 1e-10 * scale);
        }
      }
    }
  }
}

TEST_CASE("choose_a") {
  const GasLaw law(1.4);
  const SubCharParam p = choose_a(law, 1.0, 1.0, 1.2);
  CHECK(p.a == doctest::Approx(1.2 * std::sqrt(1.4)).epsilon(1e-15));
  CHECK_FALSE(p.at_characteristic_speed);

  const SubCharParam edge = choose_a(law, 1.0, 1.0, 1.0);
  CHECK(edge.a == doctest::Approx(eigenvalues(law, State::lagrangian(1.0, 0.0))[1]));
  CHECK(edge.at_characteristic_speed);

  const SubCharParam q = choose_a(law, 0.5, 2.0, 1.1);
  CHECK(q.a == doctest::Approx(1.1 * std::sqrt(1.4 * std::pow(0.5, -2.4))).epsilon(1e-14));
  for (double v = 0.5; v <= 2.0; v += 0.01) {
    const double l2 = eigenvalues(law, State::lagrangian(v, 0.0))[1];
    CHECK(q.a * q.a - l2 * l2 > 0.0);
  }

  CHECK_THROWS_AS(choose_a(law, 0.0, 1.0, 1.2), DomainError);
  CHECK_THROWS_AS(choose_a(law, 1.0, 0.5, 1.2), DomainError);
  CHECK_THROWS_AS(choose_a(law, 1.0, 1.0, 0.9), DomainError);
}

TEST_CASE("euler flux") {
  const GasLaw law(1.4);
  const Vec2 f0 = euler_flux(law, State::eulerian(1.0, 0.0), 0.0, 0.1);
  CHECK(f0[0] == 0.0);
  CHECK(f0[1] == doctest::Approx(1.0));
  const Vec2 f1 = euler_flux(law, State::eulerian(1.0, 2.0), 0.0, 0.1);
  CHECK(f1[0] == doctest::Approx(2.0));
  CHECK(f1[1] == doctest::Approx(5.0));
  const Vec2 f2 = euler_flux(law, State::eulerian(1.0, 0.0), 1.0, 0.1);
  CHECK(f2[1] == doctest::Approx(1.005).epsilon(1e-14));
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rupert/error.hpp"
#include "rupert/lp.hpp"
#include "support.hpp"

using namespace rupert;

namespace {

PlanarPolygon square(double h) {
  const std::vector<Point2> v{{-h, -h}, {h, -h}, {h, h}, {-h, h}};
  return PlanarPolygon::from_ccw(v);
}

PlanarPolygon diamond(double half_diagonal) {
  const double d = half_diagonal;
  const std::vector<Point2> v{{0, -d}, {d, 0}, {0, d}, {-d, 0}};
  return PlanarPolygon::from_ccw(v);
}

}  // namespace

TEST_CASE("diamond into square") {
  const FitResult big = fit_scale(diamond(1.4), square(1.0), {.certify = true});
  CHECK(std::abs(big.s_star - 5.0 / 7.0) <= 1e-9);
  CHECK(big.certified);
  const FitResult small = fit_scale(diamond(0.7), square(1.0), {.certify = true});
  CHECK(std::abs(small.s_star - 10.0 / 7.0) <= 1e-9);
  CHECK(small.certified);
}

TEST_CASE("square into diamond and square into itself") {
  // The square of half-width h fits the diamond of half-diagonal d at s = d / (2h).
  CHECK(fit_scale(square(1.0), diamond(1.0)).s_star == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit_scale(square(1.0), square(1.0)).s_star == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit program has one row per vertex and edge") {
  const FitProgram prog = build_fit_program(diamond(1.4), square(1.0));
  CHECK(prog.rows.size() == 16);
  // Row i * 4 + j: vertex 0 of the diamond against edge 0 of the square.
  const FitRow& r = prog.rows[0];
  CHECK(r.coeff[0] == doctest::Approx(2.8));
  CHECK(r.coeff[1] == doctest::Approx(0.0));
  CHECK(r.coeff[2] == doctest::Approx(-2.0));
  CHECK(r.rhs == doctest::Approx(2.0));
}

TEST_CASE("certificates verify and tampering is caught") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const PlanarPolygon p = testing::random_convex_polygon(rng);
    const PlanarPolygon q = testing::random_convex_polygon(rng);
    const FitResult res = fit_scale(p, q, {.certify = true});
    const FitProgram prog = build_fit_program(p, q);
    REQUIRE(res.certified);
    CHECK(verify_certificate(prog, res));
    CHECK(res.dual.size() == prog.rows.size());

    FitResult lie = res;
    lie.s_star += 1e-6;
    CHECK_FALSE(verify_certificate(prog, lie));
    FitResult neg = res;
    for (double& y : neg.dual) y = -y;
    CHECK_FALSE(verify_certificate(prog, neg));
  }
}

TEST_CASE("witness translation places s*P inside Q") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanarPolygon p = testing::random_convex_polygon(rng);
    const PlanarPolygon q = testing::random_convex_polygon(rng);
    const FitResult res = fit_scale(p, q);
    CHECK(containment_slack(p, q, res.s_star, res.t_star) >= -1e-9);
    CHECK(containment_slack(p, q, res.s_star * 1.001, res.t_star) < 0.0);
  }
}

TEST_CASE("scaling equivariance and translation invariance") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanarPolygon p = testing::random_convex_polygon(rng);
    const PlanarPolygon q = testing::random_convex_polygon(rng);
    const double base = fit_scale(p, q).s_star;
    const double c = 0.2 + 3.0 * u(rng);
    CHECK(fit_scale(scale(p, c), q).s_star == doctest::Approx(base / c).epsilon(1e-9));
    const Point2 v{10 * u(rng) - 5, 10 * u(rng) - 5};
    const Point2 w{10 * u(rng) - 5, 10 * u(rng) - 5};
    CHECK(fit_scale(translate(p, v), translate(q, w)).s_star == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("fitting is transitive") {
  std::mt19937_64 rng(13);
  int chains = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const PlanarPolygon a = testing::random_convex_polygon(rng);
    const PlanarPolygon b = testing::random_convex_polygon(rng);
    const PlanarPolygon c = testing::random_convex_polygon(rng);
    const double ab = fit_scale(a, b).s_star;
    const double bc = fit_scale(b, c).s_star;
    if (ab >= 1.0 && bc >= 1.0) {
      ++chains;
      CHECK(fit_scale(a, c).s_star >= 1.0 - 1e-12);
    }
    // The scale composes: s_ac >= s_ab * s_bc.
    CHECK(fit_scale(a, c).s_star >= ab * bc * (1.0 - 1e-9));
  }
  CHECK(chains > 0);
}

TEST_CASE("agrees with the brute-force oracle") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const PlanarPolygon p = testing::random_convex_polygon(rng);
    const PlanarPolygon q = testing::random_convex_polygon(rng);
    CHECK(std::abs(fit_scale(p, q).s_star - testing::oracle_fit_scale(p, q)) <= 1e-4);
  }
}

TEST_CASE("standard-form solver") {
  using lp_detail::solve_standard_form;
  // min y0 + 2 y1  s.t.  y0 + y1 = 1, y >= 0  ->  y = (1, 0).
  const std::vector<double> cols{1.0, 1.0};
  const std::vector<double> rhs{1.0};
  const std::vector<double> cost{1.0, 2.0};
  const auto r = solve_standard_form(1, cols, rhs, cost);
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.y[0] == doctest::Approx(1.0));
  CHECK(r.y[1] == doctest::Approx(0.0));

  // y0 = 1 and y0 = 2 cannot both hold.
  const std::vector<double> cols2{1.0, 1.0};
  const std::vector<double> rhs2{1.0, 2.0};
  CHECK_FALSE(solve_standard_form(2, cols2, rhs2, {}).feasible);
}

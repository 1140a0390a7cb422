#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "singlab/oracle.hpp"
#include "singlab/radial.hpp"

using namespace singlab;

// With u = eps + a r^2 + b r^4, matching Delta u to m/u order by order
// gives a = m/(2 n eps) and b = -m a / (4 (n+2) eps^2).
static std::pair<double, double> three_term(double eps, int n, double m, double r) {
  const double a = m / (2 * n * eps), b = -m * a / (4 * (n + 2) * eps * eps);
  return {eps + a * r * r + b * r * r * r * r, 2 * a * r + 4 * b * r * r * r};
}

TEST_CASE("series start") {
  auto [u, du] = series_start(1.0, 3, 2.0, 0.01);
  auto [u3, du3] = three_term(1.0, 3, 2.0, 0.01);
  CHECK(u == doctest::Approx(u3).epsilon(1e-15));
  CHECK(du == doctest::Approx(du3).epsilon(1e-15));
  // second-order truncation differs only at O(r^4) in u
  CHECK(std::abs(u - (1.0 + 0.01 * 0.01 / 3.0)) <= 1e-8);
  CHECK(std::abs(du - 0.02 / 3.0) <= 1e-6);

  std::tie(u, du) = series_start(0.5, 7, 6.0, 0.001);
  std::tie(u3, du3) = three_term(0.5, 7, 6.0, 0.001);
  CHECK(u == doctest::Approx(u3).epsilon(1e-15));
  CHECK(du == doctest::Approx(du3).epsilon(1e-15));
  CHECK(std::abs(u - (0.5 + 6e-6 / (14 * 0.5))) <= 1e-10);

  std::tie(u, du) = series_start(0.3, 4, 1.0, 0.0);
  CHECK(u == 0.3);
  CHECK(du == 0.0);

  CHECK_THROWS_AS(series_start(0.01, 3, 2.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(series_start(0.0, 3, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("integrate_radial rejects bad input") {
  CHECK_THROWS_AS(integrate_radial(0.0, 3, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial(-1.0, 3, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial(1.0, 3, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial(1.0, 0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("integrate_radial agrees with the fixed-step oracle") {
  const double ref = oracle::integrate_radial(0.1, 3, 2.0, 1.0, 1e-6).end_value();
  const auto p = integrate_radial(0.1, 3, 2.0, 1.0, 1e-10);
  CHECK(std::abs(p.end_value() - ref) <= 1e-8);
  CHECK(p.end_radius() == 1.0);

  const double ref7 = oracle::integrate_radial(0.05, 7, 6.0, 1.0, 1e-6).end_value();
  CHECK(std::abs(integrate_radial(0.05, 7, 6.0, 1.0).end_value() - ref7) <= 1e-8);
}

TEST_CASE("tolerance refinement moves the end value by at most 10 tol") {
  for (double tol : {1e-6, 1e-8}) {
    const double a = integrate_radial(0.1, 3, 2.0, 1.0, tol).end_value();
    const double b = integrate_radial(0.1, 3, 2.0, 1.0, tol / 10).end_value();
    CHECK(std::abs(a - b) <= 10 * tol);
  }
}

TEST_CASE("near-constant regime") {
  const double u1 = integrate_radial(10.0, 3, 2.0, 1.0).end_value();
  CHECK(u1 >= 10.0);
  CHECK(u1 <= 10.0 + 2.0 / 60.0 * 1.01);
  CHECK(std::abs(u1 - oracle::integrate_radial(10.0, 3, 2.0, 1.0, 1e-6).end_value()) <= 1e-8);
}

TEST_CASE("profiles stay positive and nondecreasing") {
  for (int n : {2, 3, 7}) {
    const auto p = integrate_radial(0.05, n, n - 1.0, 3.0);
    for (std::size_t i = 0; i < p.u.size(); ++i) {
      CHECK(p.u[i] > 0.0);
      CHECK(p.du[i] >= 0.0);
      if (i > 0) CHECK(p.u[i] >= p.u[i - 1]);
    }
  }
}

TEST_CASE("stations become samples and value_at interpolates") {
  const std::vector<double> st{0.25, 0.5, 0.75};
  const auto p = integrate_radial(0.2, 3, 2.0, 1.0, 1e-10, st);
  for (double s : st) CHECK(std::find(p.r.begin(), p.r.end(), s) != p.r.end());
  const double ref = oracle::integrate_radial(0.2, 3, 2.0, 0.6, 1e-6).end_value();
  CHECK(std::abs(p.value_at(0.6) - ref) <= 1e-6);
}

TEST_CASE("shooting map shape") {
  SUBCASE("n=7 strictly increasing on [0.01, 1]") {
    double prev = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const double eps = 0.01 * std::pow(100.0, k / 40.0);
      const double s = shooting_map(7, 6.0, eps);
      CHECK(s > prev);
      prev = s;
    }
  }
  SUBCASE("n=3 dips below 1") {
    double lo = INFINITY;
    for (int k = 0; k <= 60; ++k) lo = std::min(lo, shooting_map(3, 2.0, 0.01 * std::pow(100.0, k / 60.0)));
    CHECK(lo < 1.0);
  }
  SUBCASE("S(eps)/eps tends to 1") {
    CHECK(shooting_map(3, 2.0, 1e3) / 1e3 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(shooting_map(3, 2.0, 1e2) / 1e2 - 1.0) < std::abs(shooting_map(3, 2.0, 10.0) / 10.0 - 1.0));
  }
}

TEST_CASE("dirichlet roots") {
  const auto one = solve_dirichlet_radial(7, 6.0, 1.5);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0].end_value() - 1.5) <= 1e-8);

  const auto many = solve_dirichlet_radial(3, 2.0, 0.99);
  CHECK(many.size() >= 2);
  for (const auto& p : many) CHECK(std::abs(p.end_value() - 0.99) <= 1e-8);
  for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i].eps > many[i - 1].eps);

  const auto big = solve_dirichlet_radial(3, 2.0, 100.0, EpsWindow{1e-3, 1e3, 400});
  REQUIRE(big.size() == 1);
  CHECK(big[0].eps == doctest::Approx(100.0).epsilon(1e-3));

  CHECK(solve_dirichlet_radial(3, 2.0, 0.2).empty());
}

TEST_CASE("bifurcation constants") {
  const auto b7 = bifurcation_constants(7, 6.0);
  CHECK(b7.c1 >= 0.99);
  CHECK(b7.c1 <= 1.01);
  CHECK(b7.c2 >= 0.99);
  CHECK(b7.c2 <= 1.01);

  const auto b8 = bifurcation_constants(8, 7.0);
  CHECK(b8.c1 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(b8.c2 == doctest::Approx(1.0).epsilon(0.01));

  const auto b3 = bifurcation_constants(3, 2.0);
  CHECK(b3.c1 < 1.0);
  CHECK(b3.c2 > 1.0);
  CHECK(!b3.monotone);
  CHECK(b3.c1 <= *std::min_element(b3.scan.value.begin(), b3.scan.value.end()));
  for (double s : b3.scan.value) CHECK(s > 0.0);

  CHECK(bifurcation_constants(3, 2.0, EpsWindow{0.05, 1.0, 100}).c1_on_window_edge == false);
}

TEST_CASE("conical deviation") {
  RadialProfile cone;
  cone.r = {0.0, 0.5, 1.0};
  cone.u = cone.r;
  cone.du = {1.0, 1.0, 1.0};
  CHECK(conical_deviation(cone) == 0.0);

  std::vector<double> dev;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) dev.push_back(conical_deviation(integrate_radial(eps, 7, 6.0, 1.0)));
  for (std::size_t i = 1; i < dev.size(); ++i) CHECK(dev[i] <= dev[i - 1]);
  CHECK(dev.back() <= 2 * 0.05 + 1e-10);

  const auto p3 = oracle::integrate_radial(0.05, 3, 2.0, 1.0, 1e-6);
  const double d3 = conical_deviation(integrate_radial(0.05, 3, 2.0, 1.0));
  CHECK(d3 <= 0.05 + 1e-8);
  CHECK(std::abs(d3 - conical_deviation(p3)) <= 1e-5);
}

TEST_CASE("weighted deviation") {
  const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 64);
  const Field cone = Field::from_radius(g, [](double r) { return r; });
  CHECK(weighted_deviation(cone, 1.0, 0.25) == 0.0);

  const Field bent = Field::from_radius(g, [](double r) { return r + r * r; });
  CHECK(weighted_deviation(bent, 2.0, 0.25) == doctest::Approx(4.0).epsilon(1e-12));

  double prev = INFINITY;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double d = weighted_deviation(sample_profile(g, eps, 6.0), 1.0, 0.5);
    CHECK(std::isfinite(d));
    CHECK(d < prev);
    prev = d;
  }
  CHECK_THROWS(weighted_deviation(cone, 1.0, 0.75));
}

TEST_CASE("cone through the ODE right-hand side") {
  // u = r / sqrt(n-1): u'' + (n-1) u'/r = sqrt(n-1)/r = 1/u.
  for (int n : {3, 5, 7}) {
    const double c = 1.0 / std::sqrt(n - 1.0);
    for (double r : {0.1, 0.5, 1.0}) {
      const double lhs = (n - 1.0) * c / r;
      CHECK(std::abs(lhs - 1.0 / (c * r)) <= 1e-12 * lhs);
    }
  }
}

TEST_CASE("scaling: u(Cr)/C solves with m' = C^2 m... at eps/C") {
  // v(r) = u(C r)/C has v'' + (n-1)/r v' = C u''(Cr) ... = C m / u(Cr) = m / v.
  // So the m-profile from eps/C, read at r, equals u_eps(C r)/C.
  const double C = 2.0, eps = 0.1, tol = 1e-10;
  const auto u = integrate_radial(eps, 3, 2.0, C, tol);
  const auto v = integrate_radial(eps / C, 3, 2.0, 1.0, tol);
  for (double r : {0.1, 0.3, 0.7, 1.0}) CHECK(std::abs(v.value_at(r) - u.value_at(C * r) / C) <= 10 * tol + 1e-9);
}

TEST_CASE("sample_profile covers a radial grid") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 32);
  const Field f = sample_profile(g, 0.2, 2.0);
  const double ref = oracle::integrate_radial(0.2, 3, 2.0, g->radius(5), 1e-6).end_value();
  CHECK(std::abs(f[5] - ref) <= 1e-8);
  CHECK_THROWS_AS(sample_profile(build_grid(IntervalDomain{0, 1}, 0.1), 0.2, 2.0), std::invalid_argument);
}

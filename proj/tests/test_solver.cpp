#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "singlab/experiments.hpp"
#include "singlab/oracle.hpp"
#include "singlab/radial.hpp"
#include "singlab/solver.hpp"

using namespace singlab;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Largest eps with u_eps(1) = C for u'' = 1/u, by oracle scan and bisection.
double oracle_1d_center(double C) {
  auto end = [](double eps) { return oracle::integrate_radial(eps, 1, 1.0, 1.0, 1e-5).end_value(); };
  double hi = C, lo = C;
  while (end(lo) >= C) lo *= 0.9;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (end(mid) < C ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("newton: radial n=7 against shooting") {
  const auto roots = solve_dirichlet_radial(7, 6.0, 1.5);
  REQUIRE(roots.size() == 1);
  double prev = INFINITY;
  for (double h : {1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, h);
    NewtonOptions o;
    o.f.m = 6.0;
    const auto rep = newton_solve(Field::constant(g, 1.5), Field::constant(g, 1.5), o);
    REQUIRE(rep.converged());
    CHECK(rep.residual <= 1e-9);
    const double d = max_abs_diff(rep.solution, sample_profile(g, roots[0].eps, 6.0));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev <= 1e-4);
}

TEST_CASE("newton: symmetric 1-D solution against the shooting oracle") {
  const double center = oracle_1d_center(2.0);
  const auto g = build_grid(IntervalDomain{-1.0, 1.0}, 1.0 / 400);
  const auto rep = newton_solve(Field::constant(g, 2.0), Field::constant(g, 2.0));
  REQUIRE(rep.converged());
  const auto mid = g->find_node(std::vector<double>{0.0});
  REQUIRE(mid.has_value());
  CHECK(std::abs(rep.solution[*mid] - center) <= 1e-4);
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(rep.solution[i] - rep.solution[g->size() - 1 - i]) <= 1e-10);
}

TEST_CASE("small boundary data on the unit disk has no solution") {
  const auto radial = build_grid(RadialDomain{2, 0.0, 1.0}, 1.0 / 64);
  const auto disk = build_grid(BallDomain{2, 1.0}, 1.0 / 16);
  for (const auto& g : {radial, disk}) {
    const Field b = Field::constant(g, 0.05);
    NewtonOptions no;
    no.max_iter = 200;
    CHECK_FALSE(newton_solve(b, b, no).converged());
    for (auto method : {MaximalMethod::picard, MaximalMethod::monotone_newton}) {
      MaximalOptions mo;
      mo.method = method;
      const auto rep = maximal_solution(b, mo);
      CHECK_FALSE(rep.converged());
      CHECK(rep.nonexistence());
    }
  }
}

TEST_CASE("newton rejects nonpositive data") {
  const auto g = build_grid(IntervalDomain{0.0, 1.0}, 0.1);
  CHECK_THROWS_AS(newton_solve(Field::constant(g, 0.0), Field::constant(g, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(newton_solve(Field::constant(g, 1.0), Field::constant(g, -1.0)), std::invalid_argument);
}

TEST_CASE("picard_T") {
  SUBCASE("fixed point") {
    const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 64);
    const auto u = maximal_solution(Field::constant(g, 2.0)).solution;
    CHECK(max_abs_diff(picard_T(u, u), u) <= 1e-8);
  }
  SUBCASE("vanishing potential gives the harmonic extension") {
    const auto g = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 16);
    const Field v = picard_T(Field::constant(g, 3.0), Field::constant(g, 1e6));
    CHECK(max_abs_diff(v, Field::constant(g, 3.0)) <= 1e-6 * 3.0);
    CHECK(v.min() > 0.0);
  }
  SUBCASE("cone on an annulus is reproduced to O(h^2)") {
    double prev = INFINITY;
    for (double h : {1.0 / 50, 1.0 / 100}) {
      const auto g = build_grid(RadialDomain{7, 0.1, 1.0}, h);
      const Field cone = cone_field(g);
      const double d = max_abs_diff(picard_T(cone, cone), cone);
      CHECK(d <= 2 * h * h);
      if (std::isfinite(prev)) CHECK(prev / d >= 3.0);
      prev = d;
    }
  }
  SUBCASE("conjugate gradient matches the direct solve") {
    const auto g = build_grid(BallDomain{2, 1.0}, 1.0 / 16);
    const Field u = Field::from_point(g, [](auto x) { return 2.0 + x[0] * x[1]; });
    const Field b = Field::constant(g, 2.0);
    CHECK(max_abs_diff(picard_T(b, u, {}, LinearMethod::direct), picard_T(b, u, {}, LinearMethod::conjugate_gradient)) <=
          1e-8);
  }
}

TEST_CASE("maximal solution: unique regime matches shooting") {
  const auto roots = solve_dirichlet_radial(3, 2.0, 2.0);
  REQUIRE(roots.size() == 1);
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 256);
  MaximalOptions o;
  o.f.m = 2.0;
  const auto rep = maximal_solution(Field::constant(g, 2.0), o);
  REQUIRE(rep.converged());
  CHECK(max_abs_diff(rep.solution, sample_profile(g, roots[0].eps, 2.0)) <= 1e-4);
  CHECK(rep.max_increase <= 0.0);
  for (std::size_t k = 1; k < rep.min_history.size(); ++k) CHECK(rep.min_history[k] <= rep.min_history[k - 1]);
}

TEST_CASE("maximal solution: band picks the largest root and dominates newton") {
  const double C = 0.99;
  const auto roots = solve_dirichlet_radial(3, 2.0, C);
  REQUIRE(roots.size() >= 2);
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 256);
  for (auto method : {MaximalMethod::picard, MaximalMethod::monotone_newton}) {
    MaximalOptions o;
    o.f.m = 2.0;
    o.method = method;
    o.max_iter = 5000;
    const auto rep = maximal_solution(Field::constant(g, C), o);
    REQUIRE(rep.converged());
    CHECK(std::abs(rep.solution[0] - roots.back().eps) <= 1e-3);
    CHECK(max_abs_diff(rep.solution, sample_profile(g, roots.back().eps, 2.0)) <= 1e-3);

    NewtonOptions no;
    no.f.m = 2.0;
    for (const auto& root : roots) {
      const auto w = newton_solve(sample_profile(g, root.eps, 2.0), Field::constant(g, C), no);
      if (!w.converged()) continue;
      for (std::size_t i = 0; i < g->size(); ++i) CHECK(rep.solution[i] >= w.solution[i] - 10 * o.tol);
    }
  }
}

TEST_CASE("maximal solutions are ordered by their boundary data") {
  const auto g = build_grid(BallDomain{2, 1.0}, 1.0 / 16);
  const auto lo = maximal_solution(Field::constant(g, 1.0));
  const auto hi = maximal_solution(Field::constant(g, 1.1));
  REQUIRE(lo.converged());
  REQUIRE(hi.converged());
  for (std::size_t i : g->interior()) CHECK(hi.solution[i] > lo.solution[i]);
}

TEST_CASE("rescale_solution") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 64);
  const Field u = sample_profile(g, 0.1, 2.0);
  CHECK(max_abs_diff(rescale_solution(u, 1.0), u) == 0.0);

  const Field cone = cone_field(g);
  const Field c2 = rescale_solution(cone, 2.0);
  CHECK(c2.grid().outer_radius() == doctest::Approx(0.5));
  CHECK(max_abs_diff(c2, cone_field(c2.grid_ptr())) <= 1e-15);

  const Field v = rescale_solution(u, 2.0);
  CHECK(max_abs_diff(v, sample_profile(v.grid_ptr(), 0.05, 2.0)) <= 10 * 1e-10 + 1e-9);

  CHECK_THROWS_AS(rescale_solution(u, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rescale_solution(u, -1.0), std::invalid_argument);
}

TEST_CASE("restrict and resolve") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 128);
  MaximalOptions o;
  const auto full = maximal_solution(Field::constant(g, 2.0), o);
  REQUIRE(full.converged());

  const auto half = build_grid(RadialDomain{3, 0.0, 0.5}, 1.0 / 128);
  const auto sub = restrict_and_resolve(full.solution, half, o);
  REQUIRE(sub.converged());
  CHECK(max_abs_diff(sub.solution, restrict_field(full.solution, half)) <= 10 * o.tol);

  const auto same = restrict_and_resolve(full.solution, g, o);
  CHECK(max_abs_diff(same.solution, full.solution) <= 10 * o.tol);

  const auto ann = build_grid(RadialDomain{7, 0.1, 1.0}, 1.0 / 100);
  const auto inner = build_grid(RadialDomain{7, 0.2, 0.8}, 1.0 / 100);
  const auto cone = restrict_and_resolve(cone_field(ann), inner, o);
  REQUIRE(cone.converged());
  CHECK(max_abs_diff(cone.solution, cone_field(inner)) <= 1e-4);

  CHECK_THROWS(restrict_field(full.solution, build_grid(RadialDomain{3, 0.0, 0.5}, 1.0 / 100)));
}

TEST_CASE("residual norm vanishes on a converged solution") {
  const auto g = build_grid(BallDomain{3, 1.0}, 1.0 / 8);
  const auto rep = maximal_solution(Field::constant(g, 2.0));
  REQUIRE(rep.converged());
  CHECK(residual_norm(assemble_laplacian(g), rep.solution, {}) <= 1e-9);
  CHECK(rep.min_u > 0.0);
}

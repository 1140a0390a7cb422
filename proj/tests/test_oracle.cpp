#include <doctest.h>

#include <cmath>
#include <numbers>

#include "singlab/experiments.hpp"
#include "singlab/oracle.hpp"
#include "singlab/radial.hpp"
#include "singlab/stability.hpp"

using namespace singlab;

TEST_CASE("oracle integrator") {
  const auto ref = oracle::integrate_radial(0.1, 3, 2.0, 1.0, 1e-5);
  CHECK(ref.method != integrate_radial(0.1, 3, 2.0, 1.0).method);
  CHECK(std::abs(ref.end_value() - integrate_radial(0.1, 3, 2.0, 1.0, 1e-10).end_value()) <= 1e-7);

  const double half = oracle::integrate_radial(0.1, 3, 2.0, 1.0, 5e-6).end_value();
  CHECK(std::abs(half - ref.end_value()) <= 1e-10);

  const auto cone = oracle::integrate_radial(1e-4, 7, 6.0, 1.0, 1e-5);
  double dev = 0.0;
  for (std::size_t i = 0; i < cone.r.size(); ++i)
    if (cone.r[i] >= 0.1) dev = std::max(dev, std::abs(cone.u[i] - cone.r[i]));
  CHECK(dev <= 2e-4);

  CHECK_THROWS_AS(oracle::integrate_radial(0.1, 3, 2.0, 1.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(oracle::integrate_radial(0.0, 3, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("oracle eigenvalues") {
  SUBCASE("interval laplacian") {
    const auto g = build_grid(IntervalDomain{0.0, 1.0}, 1.0 / 200);
    const auto op = stability_operator(Field::constant(g, 1e12));
    REQUIRE(op.size() == 199);
    const auto r = oracle::dense_eig(op);
    CHECK(std::abs(r.value - std::numbers::pi * std::numbers::pi) <= 1e-3 * std::numbers::pi * std::numbers::pi);
    CHECK(r.method == "oracle-sturm-bisection");
  }
  SUBCASE("1-D stability operators") {
    const auto g = build_grid(IntervalDomain{-1.0, 1.0}, 1.0 / 200);
    const auto u = maximal_solution(Field::constant(g, 2.0));
    REQUIRE(u.converged());
    const auto op = stability_operator(u.solution);
    CHECK(smallest_eigenvalue(op).lambda_min == doctest::Approx(oracle::dense_eig(op).value).epsilon(1e-8));
  }
  SUBCASE("diagonal operator") {
    const auto g = build_grid(IntervalDomain{0.0, 1.0}, 1.0 / 6);
    const Eigen::Index n = 5;
    SparseOperator::Matrix a(n, n), b(n, static_cast<Eigen::Index>(g->size()));
    const double d[] = {4.0, -1.5, 2.0, 7.0, 0.25};
    for (Eigen::Index i = 0; i < n; ++i) a.insert(i, i) = d[i];
    b.setZero();
    const SparseOperator op(g, a, b, std::vector<double>(n, 1.0));
    CHECK(oracle::dense_eig(op).value == -1.5);
  }
  SUBCASE("jacobi path on a disk") {
    const auto g = build_grid(BallDomain{2, 1.0}, 1.0 / 10);
    const auto op = stability_operator(Field::constant(g, 1.0));
    const auto r = oracle::dense_eig(op);
    CHECK(r.method == "oracle-cyclic-jacobi");
    CHECK(r.value == doctest::Approx(smallest_eigenvalue(op).lambda_min).epsilon(1e-8));
  }
  SUBCASE("size cap") {
    const auto g = build_grid(IntervalDomain{0.0, 1.0}, 1.0 / 3000);
    CHECK_THROWS_AS(oracle::dense_eig(stability_operator(Field::constant(g, 1.0))), std::invalid_argument);
  }
}

TEST_CASE("oracle quadrature") {
  for (const auto& g : {build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 256), build_grid(RadialDomain{3, 0.2, 1.0}, 1.0 / 100),
                        build_grid(BallDomain{3, 1.0}, 1.0 / 16), build_grid(BoxDomain{{0, 0}, {2, 1}}, 1.0 / 32),
                        build_grid(IntervalDomain{-1, 1}, 0.01)}) {
    const Field u = Field::from_point(g, [](auto x) {
      double s = 1.0;
      for (double v : x) s += v * v;
      return s;
    });
    for (double p : {1.0, -2.0, 0.5}) {
      const auto r = oracle::quadrature(u, p);
      CHECK(r.value == doctest::Approx(integrate(u, p)).epsilon(1e-12));
    }
    CHECK(oracle::quadrature(Field::constant(g, 1.0), 0.0).value == doctest::Approx(g->volume()).epsilon(1e-14));
    Field cu = u;
    for (std::size_t i = 0; i < cu.size(); ++i) cu[i] *= 3.0;
    CHECK(oracle::quadrature(cu, 1.0).value == doctest::Approx(3.0 * oracle::quadrature(u, 1.0).value).epsilon(1e-14));
  }
  const auto cone = cone_field(build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 256));
  CHECK(oracle::quadrature(cone, -6.5).value == doctest::Approx(integrate(cone, -6.5)).epsilon(1e-12));
}

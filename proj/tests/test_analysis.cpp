#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "singlab/analysis.hpp"
#include "singlab/continuation.hpp"
#include "singlab/experiments.hpp"
#include "singlab/oracle.hpp"

using namespace singlab;

TEST_CASE("threshold arithmetic") {
  const double exact = 4.0 + 2.0 * std::numbers::sqrt2;
  CHECK(p_threshold() == doctest::Approx(exact).epsilon(1e-15));
  CHECK(stability_dimension_threshold() == doctest::Approx(exact).epsilon(1e-15));
  CHECK(larger_root(1.0, -2.0, -1.0) == doctest::Approx(1.0 + std::numbers::sqrt2).epsilon(1e-15));
  CHECK(larger_root(1.0, 1e8, -1.0) == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK_THROWS_AS(larger_root(1.0, 0.0, 1.0), std::domain_error);
  for (int n = 2; n <= 20; ++n) {
    const bool hardy_wins = n - 1.0 <= (n - 2.0) * (n - 2.0) / 4.0;
    CHECK(hardy_wins == (n >= stability_dimension_threshold()));
  }
}

TEST_CASE("positivity") {
  SUBCASE("cone n=7 passes both") {
    const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 256);
    const auto rep = positivity_check(cone_field(g), {0.0}, 0.25);
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.pass());
    const auto& sup = rep.checks[1];
    CHECK(sup.name == "positivity.sup");
    CHECK(sup.value == doctest::Approx(0.5 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(sup.bound == doctest::Approx(0.25 / std::sqrt(127.0)).epsilon(1e-12));
    for (const auto& c : rep.checks) CHECK(c.recompute() == c.pass);
  }
  SUBCASE("uniformly small field fails the sup bound") {
    const auto g = build_grid(RadialDomain{2, 0.0, 1.0}, 1.0 / 256);
    const auto rep = positivity_check(Field::constant(g, 0.01), {0.0}, 0.25);
    CHECK_FALSE(rep.checks[1].pass);
    CHECK(rep.checks[1].bound == doctest::Approx(0.25 / std::sqrt(3.0)));
  }
  SUBCASE("cartesian ball") {
    const auto g = build_grid(BallDomain{2, 1.0}, 1.0 / 32);
    const auto rep = positivity_check(cone_field(g), {0.0, 0.0}, 0.25);
    CHECK(rep.pass());
    CHECK(rep.checks[0].applicable);
  }
  SUBCASE("under-resolved shells are flagged") {
    const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 16);
    const auto rep = positivity_check(cone_field(g), {0.0}, 0.02);
    for (const auto& c : rep.checks) CHECK_FALSE(c.applicable);
  }
  SUBCASE("geometry violations") {
    const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 64);
    CHECK_THROWS_AS(positivity_check(cone_field(g), {0.0}, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(positivity_check(cone_field(g), {0.0}, 0.0), std::invalid_argument);
    const auto ann = build_grid(RadialDomain{3, 0.1, 1.0}, 1.0 / 64);
    CHECK_THROWS_AS(positivity_check(cone_field(ann), {0.0}, 0.25), std::invalid_argument);
    const auto box = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 32);
    CHECK_THROWS_AS(positivity_check(Field::constant(box, 1.0), {0.1, 0.5}, 0.25), std::invalid_argument);
  }
}

TEST_CASE("p-integrals") {
  const auto sq = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 16);
  CHECK(integrate(Field::constant(sq, 1.0), -2.0) == doctest::Approx(1.0).epsilon(1e-14));

  auto cone_integral = [](double h, double p) {
    const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, h);
    return integrate(cone_field(g), -p);
  };
  const double a = cone_integral(1.0 / 512, 6.5), b = cone_integral(1.0 / 1024, 6.5);
  CHECK(std::isfinite(b));
  CHECK(std::abs(a - b) / b < 0.05);

  const double c = cone_integral(1.0 / 256, 7.5), d = cone_integral(1.0 / 512, 7.5), e = cone_integral(1.0 / 1024, 7.5);
  CHECK(d / c > 1.3);
  CHECK(e / d > 1.3);

  const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 256);
  double prev = 0.0;
  for (double p : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    const auto rep = p_integral_check(cone_field(g), p, 0.4, 1.0);
    CHECK(rep.checks[0].value >= prev);
    prev = rep.checks[0].value;
    CHECK(rep.checks[0].applicable);
  }
  CHECK_FALSE(p_integral_check(cone_field(g), 7.0, 0.4, 1.0).checks[0].applicable);
  CHECK_FALSE(p_integral_check(cone_field(g), 1.0, 0.4, 1.0).checks[0].applicable);
}

TEST_CASE("p-integral calibration") {
  const auto& ref = reference_instance();
  REQUIRE(ref.converged());
  for (double p : {2.0, 4.0, 6.5}) {
    const double c = calibrate_p_integral(ref.solution, p, 2.0);
    const auto exact = p_integral_check(ref.solution, p, 2.0, c).checks[0];
    CHECK(exact.value == doctest::Approx(exact.bound).epsilon(1e-12));
    CHECK(p_integral_check(ref.solution, p, 2.0, p_integral_constant(p)).pass());
    CHECK(p_integral_constant(p) == doctest::Approx(10.0 * c).epsilon(1e-14));
  }
}

TEST_CASE("W^{1,2} data bound") {
  SUBCASE("reference instance") {
    const auto& ref = reference_instance();
    const Field phi = Field::constant(ref.solution.grid_ptr(), 2.0);
    CHECK(w12_p2_check(ref.solution, phi, 2.0, w12_constant()).pass());
  }
  SUBCASE("cone trace on an annulus") {
    const auto g = build_grid(RadialDomain{7, 0.1, 1.0}, 1.0 / 256);
    const Field cone = cone_field(g);
    CHECK(w12_p2_check(cone, cone, cone.min(), w12_constant()).pass());
  }
  SUBCASE("linear ramp on the square") {
    const auto g = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 32);
    const Field phi = Field::from_point(g, [](auto x) { return 1.0 + x[0]; });
    const auto rep = maximal_solution(phi);
    REQUIRE(rep.converged());
    const auto chk = w12_p2_check(rep.solution, phi, 1.0, w12_constant()).checks[0];
    CHECK(chk.pass);
    CHECK(chk.param("int_1_plus_grad_phi_sq") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(chk.value > 0.0);
  }
}

TEST_CASE("holder quotients") {
  const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 128);
  const Field cone = cone_field(g);
  CHECK(holder_quotient(cone, 1.0, Region{0.1, 0.9}) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
  CHECK(holder_quotient(Field::constant(g, 3.0), 0.5) == 0.0);

  const auto box = build_grid(BoxDomain{{-1, -1}, {1, 1}}, 1.0 / 16);
  const Field bc = cone_field(box);
  CHECK(holder_quotient(bc, 1.0, Region{0.2, 0.8}) <= 1.0 + 1e-12);
  CHECK(holder_quotient(bc, 1.0, Region{0.2, 0.8}) >= 0.9);
  CHECK(holder_quotient(bc, 0.7, Region{0.2, 0.5}) <= holder_quotient(bc, 0.7, Region{0.1, 0.9}));

  const auto big = build_grid(BoxDomain{{-1, -1}, {1, 1}}, 1.0 / 128);
  const Field wave = Field::from_point(big, [](auto x) { return std::sin(3 * x[0]) + x[1] * x[1]; });
  CHECK(holder_quotient(wave, 0.9, {}, 5) == holder_quotient(wave, 0.9, {}, 5));
  CHECK(holder_quotient(wave, 1.0) <= std::sqrt(13.0) + 1e-9);

  CHECK_THROWS_AS(holder_quotient(cone, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(holder_quotient(cone, 1.5), std::invalid_argument);
}

TEST_CASE("holder quotients along a singular sequence stay bounded") {
  const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 128);
  const std::vector<double> targets{0.2, 0.1, 0.05};
  const auto seq = singular_sequence(Field::constant(g, 1.0), Field::constant(g, 0.3), targets);
  double lo = INFINITY, hi = 0.0;
  for (const auto& e : seq) {
    REQUIRE(e.solution.has_value());
    const double q = holder_quotient(*e.solution, 0.9);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("log trick") {
  const double R = std::numbers::e;
  const auto g = build_grid(RadialDomain{2, 0.0, R * R}, 1e-3);
  const auto lt = log_trick_functional(Field::constant(g, 1.0), R);
  const Field zeta = Field::from_radius(g, [R](double r) {
    if (r <= R) return 1.0;
    if (r >= R * R) return 0.0;
    return 2.0 - std::log(r) / std::log(R);
  });
  CHECK(lt.value == doctest::Approx(oracle::quadrature(zeta, 2.0).value).epsilon(1e-10));
  CHECK(lt.cutoff_energy == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-3));

  // the cutoff energy carries the (log R)^{1-n} scaling
  const auto g2 = build_grid(RadialDomain{2, 0.0, std::pow(R, 4)}, 1e-2);
  const auto a = log_trick_functional(cone_field(g2), R);
  const auto b = log_trick_functional(cone_field(g2), R * R);
  CHECK(a.cutoff_energy / b.cutoff_energy == doctest::Approx(2.0).epsilon(0.3));
  CHECK(std::isfinite(a.value));
  CHECK(std::isfinite(b.value));

  Field outside = Field::constant(g2, 1.0);
  const double base = log_trick_functional(outside, R).value;
  for (std::size_t i = 0; i < g2->size(); ++i)
    if (g2->radius(i) > R * R) outside[i] = 123.0;
  CHECK(log_trick_functional(outside, R).value == base);

  CHECK_THROWS_AS(log_trick_functional(Field::constant(g, 1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(log_trick_functional(Field::constant(g, 1.0), 3.0), std::invalid_argument);
}

TEST_CASE("box counting") {
  const std::vector<double> scales{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  SUBCASE("cone point singularity") {
    const double h = 1.0 / 1024;
    const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, h);
    const double tau = 3 * h / std::sqrt(6.0);
    const auto rep = box_dimension(cone_field(g), tau, scales);
    CHECK(rep.checks[0].value <= 0.5);
    CHECK(rep.pass());
    const auto counts = box_counts(cone_field(g), tau, scales);
    for (std::size_t k = 1; k < counts.size(); ++k) CHECK(counts[k] >= counts[k - 1]);
  }
  SUBCASE("full sublevel set") {
    const auto g = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 256);
    const auto rep = box_dimension(Field::constant(g, 0.05), 0.1, scales);
    CHECK(rep.checks[0].value == doctest::Approx(2.0).epsilon(0.05));
    const auto counts = box_counts(Field::constant(g, 0.05), 0.1, scales);
    CHECK(counts[0] >= 256.0);
  }
  SUBCASE("radial full ball") {
    const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 512);
    CHECK(box_dimension(Field::constant(g, 0.05), 0.1, scales).checks[0].value ==
          doctest::Approx(3.0).epsilon(0.1));
  }
  SUBCASE("empty sublevel set") {
    const auto g = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 64);
    const auto rep = box_dimension(Field::constant(g, 1.0), 0.1, {1.0 / 8, 1.0 / 16});
    CHECK(std::isinf(rep.checks[0].value));
    CHECK(rep.checks[0].value < 0.0);
    CHECK(rep.pass());
  }
  SUBCASE("bad scales") {
    const auto g = build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 64);
    const Field u = Field::constant(g, 0.05);
    CHECK_THROWS_AS(box_dimension(u, 0.1, {1.0 / 16, 1.0 / 8}), std::invalid_argument);
    CHECK_THROWS_AS(box_dimension(u, 0.1, {1.0 / 16, 1.0 / 64}), std::invalid_argument);
    CHECK_THROWS_AS(box_dimension(u, 0.0, {1.0 / 8, 1.0 / 16}), std::invalid_argument);
  }
}

TEST_CASE("checks are recomputable") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 128);
  EstimateReport all = positivity_check(cone_field(g), {0.0}, 0.25);
  all.append(p_integral_check(cone_field(g), 2.0, 0.5, 1.0));
  all.append(box_dimension(cone_field(g), 0.05, {1.0 / 8, 1.0 / 16}));
  for (const auto& c : all.checks) {
    CHECK(c.recompute() == c.pass);
    CHECK_FALSE(c.inequality.empty());
    CHECK_FALSE(c.params.empty());
  }
  CHECK_THROWS_AS(all.checks[0].param("nope"), std::out_of_range);
}

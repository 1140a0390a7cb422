#include <doctest.h>

#include <cmath>
#include <vector>

#include "singlab/continuation.hpp"
#include "singlab/experiments.hpp"
#include "singlab/radial.hpp"

using namespace singlab;

TEST_CASE("degenerate homotopy") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 32);
  const Field phi = Field::constant(g, 2.0);
  const auto trace = homotopy_run(phi, phi);
  CHECK(trace.status == TraceStatus::completed);
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].converged);
  CHECK(trace.steps[0].boundary_level == 2.0);
  CHECK(trace.steps[0].t == 1.0);
}

TEST_CASE("homotopy preconditions") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 32);
  CHECK_THROWS_AS(homotopy_run(Field::constant(g, 1.0), Field::constant(g, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(homotopy_run(Field::constant(g, 1.0), Field::constant(g, 0.0)), std::invalid_argument);
}

TEST_CASE("disk: nonexistence along the way down") {
  const auto g = build_grid(BallDomain{2, 1.0}, 1.0 / 16);
  const auto trace = homotopy_run(Field::constant(g, 2.0), Field::constant(g, 0.05));
  CHECK(trace.status == TraceStatus::nonexistence_detected);
  CHECK(trace.failure_t < 1.0);
  REQUIRE(trace.steps.size() >= 2);
  CHECK_FALSE(trace.steps.back().converged);
  const auto& last = trace.steps[trace.steps.size() - 2];
  CHECK(last.converged);
  CHECK(last.min_u > 0.0);

  for (std::size_t k = 1; k < trace.steps.size(); ++k) CHECK(trace.steps[k].t > trace.steps[k - 1].t);
  for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k) {
    CHECK(trace.steps[k].converged);
    CHECK(trace.steps[k].lambda_min >= -1e-6);
    if (k > 0) CHECK(trace.steps[k].min_u <= trace.steps[k - 1].min_u);
  }

  const auto folds = fold_detect(trace);
  REQUIRE_FALSE(folds.empty());
  CHECK(folds.back().t_hi == doctest::Approx(trace.failure_t));
}

TEST_CASE("radial n=7 completes toward the cone") {
  const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 64);
  const auto trace = homotopy_run(Field::constant(g, 2.0), Field::constant(g, 1.0));
  CHECK(trace.status == TraceStatus::completed);
  CHECK(trace.steps.back().t == 1.0);
  for (std::size_t k = 1; k < trace.steps.size(); ++k) CHECK(trace.steps[k].min_u <= trace.steps[k - 1].min_u);
  CHECK(fold_detect(trace).empty());

  const auto roots = solve_dirichlet_radial(7, 1.0, 1.0, EpsWindow{1e-6, 1e2, 400});
  REQUIRE(roots.size() == 1);
  CHECK(trace.steps.back().min_u == doctest::Approx(roots[0].eps).epsilon(0.05));
}

TEST_CASE("warm-start consistency") {
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 64);
  HomotopyOptions a, b;
  a.steps = 5;
  b.steps = 10;
  const auto ta = homotopy_run(Field::constant(g, 3.0), Field::constant(g, 2.0), a);
  const auto tb = homotopy_run(Field::constant(g, 3.0), Field::constant(g, 2.0), b);
  REQUIRE(ta.status == TraceStatus::completed);
  REQUIRE(tb.status == TraceStatus::completed);
  std::size_t common = 0;
  for (std::size_t i = 0; i < ta.steps.size(); ++i)
    for (std::size_t j = 0; j < tb.steps.size(); ++j) {
      if (std::abs(ta.steps[i].t - tb.steps[j].t) > 1e-12) continue;
      ++common;
      double d = 0.0;
      for (std::size_t k = 0; k < g->size(); ++k) d = std::max(d, std::abs(ta.solutions[i][k] - tb.solutions[j][k]));
      CHECK(d <= 10 * a.solver.tol);
      break;
    }
  CHECK(common == ta.steps.size());
}

TEST_CASE("fold detection") {
  ContinuationTrace flat;
  for (int k = 0; k < 5; ++k) {
    TraceStep s;
    s.t = 0.25 * k;
    s.lambda_min = 0.5 + k;
    s.converged = true;
    flat.steps.push_back(s);
  }
  CHECK(fold_detect(flat).empty());

  ContinuationTrace crossing = flat;
  crossing.steps[3].lambda_min = -0.2;
  crossing.steps[3].boundary_level = 0.7;
  crossing.steps[2].boundary_level = 0.8;
  const auto f = fold_detect(crossing);
  REQUIRE(f.size() >= 1);
  CHECK(f.front().t_lo == 0.5);
  CHECK(f.front().t_hi == 0.75);

  // n=3 radial: the maximal branch ends near the level where S attains C1
  const auto b3 = bifurcation_constants(3, 2.0);
  const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 128);
  MaximalOptions mo;
  mo.f.m = 2.0;
  mo.method = MaximalMethod::monotone_newton;
  HomotopyOptions ho;
  ho.solver = mo;
  const auto trace = homotopy_run(Field::constant(g, 2.0), Field::constant(g, 0.5), ho);
  CHECK(trace.status == TraceStatus::nonexistence_detected);
  const auto folds = fold_detect(trace);
  REQUIRE_FALSE(folds.empty());
  const auto& last = folds.back();
  CHECK(std::min(last.level_lo, last.level_hi) <= b3.c1 + 0.01);
  CHECK(std::max(last.level_lo, last.level_hi) >= b3.c1 - 0.01);
}

TEST_CASE("singular sequences") {
  SUBCASE("n=7 approaches the cone") {
    // with m = 1 the branch reaches the cone as the data approach 1/sqrt(6)
    const auto g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 128);
    const std::vector<double> targets{0.2, 0.1, 0.05};
    const auto seq = singular_sequence(Field::constant(g, 1.0), Field::constant(g, 0.3), targets);
    REQUIRE(seq.size() == 3);
    for (const auto& e : seq) {
      REQUIRE(e.achieved);
      CHECK(e.min_u <= e.target);
      CHECK(e.min_u >= 0.8 * e.target);
    }
    CHECK(seq[1].cone_distance < seq[0].cone_distance);
    CHECK(seq[2].cone_distance < seq[1].cone_distance);
  }
  SUBCASE("disk: a suffix is unreachable") {
    const auto g = build_grid(BallDomain{2, 1.0}, 1.0 / 16);
    const std::vector<double> targets{0.2, 0.1, 0.05, 0.01};
    const auto seq = singular_sequence(Field::constant(g, 1.0), Field::constant(g, 0.05), targets);
    REQUIRE(seq.size() == 4);
    CHECK_FALSE(seq.back().achieved);
    CHECK_FALSE(seq.back().obstruction.empty());
    bool missed = false;
    for (const auto& e : seq) {
      if (!e.achieved) missed = true;
      if (missed) CHECK_FALSE(e.achieved);
    }
  }
  SUBCASE("targets above the boundary data") {
    const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 32);
    const std::vector<double> targets{10.0};
    const auto seq = singular_sequence(Field::constant(g, 2.0), Field::constant(g, 1.0), targets);
    REQUIRE(seq.size() == 1);
    CHECK_FALSE(seq[0].achieved);
  }
  SUBCASE("targets must decrease") {
    const auto g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 32);
    const std::vector<double> bad{0.1, 0.2};
    CHECK_THROWS_AS(singular_sequence(Field::constant(g, 2.0), Field::constant(g, 1.0), bad), std::invalid_argument);
  }
}

TEST_CASE("terminal minimum is grid-stable on the disk") {
  std::vector<double> mins;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto g = build_grid(BallDomain{2, 1.0}, h);
    HomotopyOptions o;
    o.track_stability = false;
    o.keep_solutions = false;
    const auto trace = homotopy_run(Field::constant(g, 2.0), Field::constant(g, 0.05), o);
    REQUIRE(trace.status == TraceStatus::nonexistence_detected);
    mins.push_back(trace.steps[trace.steps.size() - 2].min_u);
  }
  for (double m : mins) {
    CHECK(m <= 2.0 * mins.front());
    CHECK(m >= 0.5 * mins.front());
  }
}

TEST_CASE("cone distance") {
  const auto g = build_grid(RadialDomain{5, 0.0, 1.0}, 1.0 / 16);
  CHECK(cone_distance(cone_field(g, 2.0), 2.0) == 0.0);
  CHECK(cone_distance(Field::constant(g, 1.0), 4.0) == doctest::Approx(0.0 + 1.0 - g->first_radius()).epsilon(1e-12));
}

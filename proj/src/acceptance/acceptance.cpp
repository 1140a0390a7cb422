#include "singlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "singlab/analysis.hpp"
#include "singlab/continuation.hpp"
#include "singlab/experiments.hpp"
#include "singlab/format.hpp"
#include "singlab/oracle.hpp"
#include "singlab/radial.hpp"
#include "singlab/solver.hpp"
#include "singlab/stability.hpp"

namespace singlab::acceptance {

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; returns it so callers can chain.
  bool expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
    return ok;
  }
};

std::string fmt(double v) { return format_number(v); }

double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double interior_min(const Field& u) {
  double m = INFINITY;
  for (std::size_t i : u.grid().interior()) m = std::min(m, u[i]);
  return m;
}

void cone_exactness(Result& r) {
  const Nonlinearity f{1.0, 1.0};
  double res[2];
  const double hs[2] = {1.0 / 100, 1.0 / 200};
  for (int k = 0; k < 2; ++k) {
    const GridPtr g = build_grid(RadialDomain{7, 0.1, 1.0}, hs[k]);
    res[k] = residual_norm(assemble_laplacian(g), cone_field(g), f);
  }
  const double ratio = res[0] / res[1];
  r.detail << "residual h=1/100 " << fmt(res[0]) << ", h=1/200 " << fmt(res[1]) << ", ratio " << fmt(ratio) << "; ";
  r.expect(ratio >= 3.2 && ratio <= 4.8, "ratio in [3.2, 4.8]");
}

void radial_convergence(Result& r) {
  for (int n : {3, 7}) {
    const auto near = integrate_radial(0.05, n, n - 1.0, 1.0);
    const auto far = integrate_radial(0.2, n, n - 1.0, 1.0);
    const double dn = conical_deviation(near), df = conical_deviation(far);
    r.detail << "n=" << n << " dev(0.05)=" << fmt(dn) << " dev(0.2)=" << fmt(df) << " u(1)=" << fmt(near.end_value())
             << "; ";
    r.expect(dn <= df, "deviation monotone for n=" + std::to_string(n));
    r.expect(std::abs(near.end_value() - 1.0) <= 0.06, "u(1) within 0.06 of 1 for n=" + std::to_string(n));
  }
}

void bifurcation(Result& r) {
  for (int n : {7, 8}) {
    const auto b = bifurcation_constants(n, n - 1.0);
    r.detail << "n=" << n << " C1=" << fmt(b.c1) << " C2=" << fmt(b.c2) << "; ";
    r.expect(b.c1 >= 0.99 && b.c1 <= 1.01 && b.c2 >= 0.99 && b.c2 <= 1.01, "C1, C2 in [0.99, 1.01] for n=" + std::to_string(n));
  }
  const auto b3 = bifurcation_constants(3, 2.0);
  const auto roots = solve_dirichlet_radial(3, 2.0, b3.c1 + 0.005);
  r.detail << "n=3 C1=" << fmt(b3.c1) << " C2=" << fmt(b3.c2) << " solutions at C1+0.005: " << roots.size() << "; ";
  r.expect(b3.c1 < 0.99, "n=3 C1 < 0.99");
  r.expect(roots.size() >= 2, "at least two solutions at C1 + 0.005");
}

void stability_dichotomy(Result& r) {
  const GridPtr g7 = build_grid(RadialDomain{7, 1e-4, 1.0}, 5e-5);
  const auto rep = smallest_eigenvalue(stability_operator(cone_field(g7)));
  r.detail << "n=7 nodes=" << g7->size() << " lambda_min=" << fmt(rep.lambda_min) << "; ";
  r.expect(g7->size() >= 4000, "at least 4000 nodes");
  r.expect(rep.converged && rep.lambda_min >= -1e-6, "n=7 cone lambda_min >= -1e-6");
  for (int n = 2; n <= 6; ++n) {
    const GridPtr g = build_grid(RadialDomain{n, 1e-4, 1.0}, 2.5e-4);
    const auto w = hardy_witness(n, g);
    r.detail << "n=" << n << " witness=" << fmt(w.quotient) << "; ";
    r.expect(w.negative, "witness negative for n=" + std::to_string(n));
  }
}

// Newton from low starts; every solution distinct from u_max must be
// unstable and lie below it.  Returns the number of distinct ones.
int second_solutions(Result& r, const Field& umax, const Field& boundary, const std::vector<Field>& starts,
                     const std::string& label) {
  int found = 0;
  for (const Field& s : starts) {
    const auto rep = newton_solve(s, boundary);
    if (!rep.converged()) continue;
    if (sup_diff(rep.solution, umax) <= 1e-6) continue;
    ++found;
    const double lam = smallest_eigenvalue(stability_operator(rep.solution)).lambda_min;
    bool below = true;
    for (std::size_t i = 0; i < umax.size(); ++i) below = below && rep.solution[i] <= umax[i] + 1e-9;
    r.detail << label << " second solution min u=" << fmt(interior_min(rep.solution)) << " lambda=" << fmt(lam) << "; ";
    r.expect(lam < 0.0, label + " second solution unstable");
    r.expect(below, label + " second solution below the maximal one");
  }
  return found;
}

void maximal_unique(Result& r) {
  const GridPtr g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 256);
  MaximalOptions o;
  o.method = MaximalMethod::monotone_newton;
  for (double C : {2.0, 0.70}) {
    const std::string label = "C=" + fmt(C);
    const Field boundary = Field::constant(g, C);
    const auto rep = maximal_solution(boundary, o);
    if (!r.expect(rep.converged(), label + " maximal solution converged")) continue;
    const auto roots = solve_dirichlet_radial(3, 1.0, C);
    if (!r.expect(!roots.empty(), label + " shooting roots found")) continue;
    const Field top = sample_profile(g, roots.back().eps, 1.0);
    const double diff = sup_diff(rep.solution, top);
    const double lam = smallest_eigenvalue(stability_operator(rep.solution)).lambda_min;
    r.detail << label << " roots=" << roots.size() << " |u_max - largest root|=" << fmt(diff) << " lambda=" << fmt(lam)
             << "; ";
    r.expect(diff <= 1e-4, label + " maximal solution matches the largest root");
    r.expect(lam >= -1e-6, label + " maximal solution stable");
    std::vector<Field> starts;
    for (double s : {0.1, 0.3, 0.6}) {
      Field f = Field::constant(g, s * C);
      for (std::size_t i : g->boundary()) f[i] = C;
      starts.push_back(f);
    }
    for (std::size_t k = 0; k + 1 < roots.size(); ++k) starts.push_back(sample_profile(g, roots[k].eps, 1.0));
    const int found = second_solutions(r, rep.solution, boundary, starts, label);
    r.detail << label << " distinct low solutions: " << found << "; ";
    if (roots.size() >= 2) r.expect(found >= 1, label + " lower solution reached from a low start");
  }
}

void nonexistence(Result& r) {
  std::vector<double> mins;
  for (int k : {32, 64, 128}) {
    const GridPtr g = build_grid(BallDomain{2, 1.0}, 1.0 / k);
    const auto trace = homotopy_run(Field::constant(g, 2.0), Field::constant(g, 0.05));
    double last = NAN, level = NAN;
    for (const auto& s : trace.steps)
      if (s.converged) {
        last = s.min_u;
        level = s.boundary_level;
      }
    mins.push_back(last);
    r.detail << "h=1/" << k << " " << to_string(trace.status) << " last level " << fmt(level) << " min u " << fmt(last)
             << "; ";
    r.expect(trace.status == TraceStatus::nonexistence_detected, "nonexistence detected at h=1/" + std::to_string(k));
  }
  const auto [lo, hi] = std::minmax_element(mins.begin(), mins.end());
  r.expect(std::isfinite(*lo) && *lo > 0.0 && *hi / *lo <= 2.0, "terminal min u within a factor 2");
  const GridPtr g = build_grid(BallDomain{2, 1.0}, 1.0 / 64);
  const auto direct = maximal_solution(Field::constant(g, 0.05));
  r.detail << "direct solve at 0.05: " << to_string(direct.status) << "; ";
  r.expect(direct.nonexistence(), "direct solve reports nonexistence");
}

std::vector<SequenceEntry> n7_sequence() {
  const GridPtr g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 256);
  const std::vector<double> targets{0.2, 0.1, 0.05};
  return singular_sequence(Field::constant(g, 1.0), Field::constant(g, 0.3), targets);
}

void singular_sequence_n7(Result& r) {
  const auto seq = n7_sequence();
  double prev = INFINITY;
  for (const auto& e : seq) {
    r.detail << "target " << fmt(e.target) << ": min u " << fmt(e.min_u) << " cone distance " << fmt(e.cone_distance)
             << "; ";
    r.expect(e.achieved, "target " + fmt(e.target) + " reached");
    r.expect(e.cone_distance < prev, "cone distance decreases at target " + fmt(e.target));
    prev = e.cone_distance;
  }
  r.expect(!seq.empty() && seq.back().min_u <= 0.05, "min u <= 0.05");
}

void p_threshold_machinery(Result& r) {
  const double p = p_threshold();
  const double exact = 4.0 + 2.0 * std::numbers::sqrt2;
  const double nt = stability_dimension_threshold();
  const double poly = nt * nt - 8.0 * nt + 8.0;
  r.detail << "threshold " << fmt(p) << " (4+2sqrt2 " << fmt(exact) << "), dimension root " << fmt(nt)
           << ", polynomial there " << fmt(poly) << "; ";
  const double ulp = 4.0 * std::numeric_limits<double>::epsilon() * exact;
  r.expect(std::abs(p - exact) <= ulp, "threshold equals 4+2sqrt2");
  r.expect(std::abs(nt - p) <= ulp, "dimension root equals the threshold");
  r.expect(std::abs(poly) <= 64.0 * std::numeric_limits<double>::epsilon() * nt * nt, "n^2-8n+8 vanishes");
  for (double q : {6.5, 7.5}) {
    std::vector<double> v;
    for (int k : {512, 1024, 2048}) v.push_back(integrate(cone_field(build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / k)), -q));
    const double c1 = v[1] / v[0] - 1.0, c2 = v[2] / v[1] - 1.0;
    r.detail << "p=" << fmt(q) << " relative changes " << fmt(c1) << ", " << fmt(c2) << "; ";
    if (q < p)
      r.expect(std::abs(c2) < 0.05, "p=6.5 refinement-stable");
    else
      r.expect(c1 > 0.2 && c2 > 0.2, "p=7.5 refinement-divergent");
  }
}

void holder_uniformity(Result& r) {
  const auto seq = n7_sequence();
  std::vector<double> q;
  for (const auto& e : seq) {
    if (!r.expect(e.achieved && e.solution.has_value(), "sequence member at target " + fmt(e.target))) continue;
    q.push_back(holder_quotient(*e.solution, 0.9, Region{0.1, 1.0}));
    r.detail << "target " << fmt(e.target) << " quotient " << fmt(q.back()) << "; ";
  }
  if (q.empty()) return;
  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  r.detail << "max/min " << fmt(*hi / *lo) << "; ";
  r.expect(*hi / *lo <= 3.0, "quotients vary by at most a factor 3");
}

void box_dimension_check(Result& r) {
  const GridPtr g = build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 1024);
  const double tau = 3.0 * g->spacing() / std::sqrt(6.0);
  const std::vector<double> scales{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto cone = box_dimension(cone_field(g), tau, scales).checks.front();
  const auto full = box_dimension(Field::constant(g, tau / 2), tau, scales).checks.front();
  r.detail << "cone slope " << fmt(cone.value) << " (line " << fmt(cone.bound) << "), full ball slope " << fmt(full.value)
           << "; ";
  r.expect(cone.pass, "cone slope below the acceptance line");
  r.expect(std::abs(full.value - 7.0) <= 0.7, "full-ball slope within 10% of n");
}

void oracle_agreement(Result& r) {
  struct Ode {
    int n;
    double m, eps;
  };
  for (const Ode& c : {Ode{3, 2.0, 0.1}, Ode{7, 6.0, 0.05}, Ode{3, 1.0, 1.91408209779}, Ode{8, 7.0, 0.01}, Ode{2, 1.0, 0.2}}) {
    const double a = integrate_radial(c.eps, c.n, c.m, 1.0).end_value();
    const double b = oracle::integrate_radial(c.eps, c.n, c.m, 1.0).end_value();
    r.detail << "ode n=" << c.n << " eps=" << fmt(c.eps) << " diff " << fmt(a - b) << "; ";
    r.expect(std::abs(a - b) <= 1e-7, "radial integrator vs oracle");
  }

  std::vector<std::pair<std::string, SparseOperator>> ops;
  {
    const GridPtr g = build_grid(IntervalDomain{0.0, 1.0}, 1.0 / 200);
    const auto lap = assemble_laplacian(g);
    ops.emplace_back("-Laplacian 1-D", lap.combine(-1.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lap.size()))));
  }
  ops.emplace_back("cone n=7 annulus", stability_operator(cone_field(build_grid(RadialDomain{7, 0.1, 1.0}, 1.0 / 1000))));
  {
    const GridPtr g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 256);
    MaximalOptions o;
    o.method = MaximalMethod::monotone_newton;
    ops.emplace_back("maximal n=3 C=2", stability_operator(maximal_solution(Field::constant(g, 2.0), o).solution));
  }
  {
    const GridPtr g = build_grid(BallDomain{2, 1.0}, 1.0 / 10);
    ops.emplace_back("disk C=1", stability_operator(maximal_solution(Field::constant(g, 1.0)).solution));
  }
  for (const auto& [label, op] : ops) {
    const double a = smallest_eigenvalue(op).lambda_min;
    const double b = oracle::dense_eig(op).value;
    r.detail << label << " lambda " << fmt(a) << " vs " << fmt(b) << "; ";
    r.expect(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)), "eigensolver vs oracle (" + label + ")");
  }

  std::vector<std::pair<Field, double>> quads;
  quads.emplace_back(cone_field(build_grid(RadialDomain{7, 0.0, 1.0}, 1.0 / 1024)), -6.5);
  quads.emplace_back(reference_instance().solution, -2.0);
  quads.emplace_back(Field::from_point(build_grid(BallDomain{2, 1.0}, 1.0 / 64),
                                       [](std::span<const double> x) { return 1.0 + x[0] * x[0] + 0.5 * x[1]; }),
                     -2.0);
  quads.emplace_back(Field::constant(build_grid(BoxDomain{{0, 0}, {1, 1}}, 1.0 / 32), 1.0), -2.0);
  for (const auto& [u, p] : quads) {
    const double a = integrate(u, p), b = oracle::quadrature(u, p).value;
    r.detail << "quadrature " << to_string(u.grid().kind()) << " rel diff " << fmt((a - b) / b) << "; ";
    r.expect(std::abs(a - b) <= 1e-12 * std::abs(b), "quadrature vs oracle");
  }
}

void energy_behavior(Result& r) {
  const GridPtr g = build_grid(RadialDomain{2, 0.0, 1.0}, 1e-3);
  const Field phi = Field::constant(g, 1.0);
  const Field chi = smooth_cutoff(g, 0.5, 1.0);
  double prev = INFINITY;
  double last = 0.0;
  for (double eps : {0.1, 0.01, 0.001}) {
    last = energy(cutoff_family(phi, chi, eps));
    r.detail << "eps=" << fmt(eps) << " F=" << fmt(last) << "; ";
    r.expect(last < prev, "energy decreases at eps=" + fmt(eps));
    prev = last;
  }
  r.expect(last < -10.0, "F < -10 at eps=0.001");
}

struct Criterion {
  const char* name;
  double budget;
  void (*body)(Result&);
};

const Criterion criteria[] = {
    {"cone exactness", 1, cone_exactness},
    {"radial convergence", 5, radial_convergence},
    {"bifurcation constants", 60, bifurcation},
    {"stability dichotomy", 30, stability_dichotomy},
    {"maximal = stable = unique", 60, maximal_unique},
    {"nonexistence / lower bound", 120, nonexistence},
    {"singular sequence n=7", 60, singular_sequence_n7},
    {"p-integral threshold", 30, p_threshold_machinery},
    {"Hoelder uniformity", 30, holder_uniformity},
    {"box dimension", 30, box_dimension_check},
    {"oracle agreement", 120, oracle_agreement},
    {"energy behavior", 5, energy_behavior},
};

}  // namespace

int count() { return static_cast<int>(std::size(criteria)); }

Outcome run(int id) {
  if (id < 1 || id > count()) throw std::out_of_range("acceptance::run: no criterion " + std::to_string(id));
  const Criterion& c = criteria[id - 1];
  Outcome out;
  out.id = id;
  out.name = c.name;
  out.budget = c.budget;
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    c.body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail << "exception: " << e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.seconds > out.budget) r.expect(false, "runtime budget " + fmt(out.budget) + " s");
  out.pass = r.pass;
  out.detail = r.detail.str();
  while (!out.detail.empty() && (out.detail.back() == ' ' || out.detail.back() == ';')) out.detail.pop_back();
  return out;
}

std::vector<Outcome> run_all() {
  std::vector<Outcome> out;
  for (int id = 1; id <= count(); ++id) out.push_back(run(id));
  return out;
}

}  // namespace singlab::acceptance

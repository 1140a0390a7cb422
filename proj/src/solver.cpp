#include "singlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singlab {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::collapsed: return "collapsed";
    case SolveStatus::unstable_iterate: return "unstable-iterate";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

namespace {

double interior_min(const Field& u) {
  double m = INFINITY;
  for (std::size_t i : u.grid().interior()) m = std::min(m, u[i]);
  return m;
}

void check_boundary(const Field& boundary) {
  for (std::size_t i : boundary.grid().boundary())
    if (!(boundary[i] > 0.0)) throw std::invalid_argument("boundary data must be positive");
}

}  // namespace

double residual_norm(const SparseOperator& laplacian, const Field& u, const Nonlinearity& f) {
  const Eigen::VectorXd lu = laplacian.apply(u);
  const auto& in = u.grid().interior();
  double r = 0.0;
  for (std::size_t k = 0; k < in.size(); ++k) {
    const double v = u[in[k]];
    if (!(v > 0.0)) return INFINITY;
    r = std::max(r, std::abs(lu[static_cast<Eigen::Index>(k)] - f.value(v)));
  }
  return r;
}

SolveReport newton_solve(const Field& initial, const Field& boundary, const NewtonOptions& opt) {
  if (initial.grid_ptr() != boundary.grid_ptr()) throw std::invalid_argument("newton_solve: grid mismatch");
  if (!(opt.guard > 0.0 && opt.guard < 1.0)) throw std::invalid_argument("newton_solve: guard must lie in (0, 1)");
  check_boundary(boundary);
  Field u = initial;
  for (std::size_t i : u.grid().boundary()) u[i] = boundary[i];
  if (!(u.min() > 0.0)) throw std::invalid_argument("newton_solve: initial guess must be positive");

  const SparseOperator lap = assemble_laplacian(u.grid_ptr());
  const auto& in = u.grid().interior();
  const auto m = static_cast<Eigen::Index>(in.size());

  SolveReport rep;
  rep.f = opt.f;
  rep.residual = residual_norm(lap, u, opt.f);
  rep.residual_history.push_back(rep.residual);
  rep.min_u = interior_min(u);
  rep.min_history.push_back(rep.min_u);

  while (rep.residual > opt.tol && rep.iterations < opt.max_iter) {
    Eigen::VectorXd F = lap.apply(u);
    Eigen::VectorXd d(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double v = u[in[static_cast<std::size_t>(k)]];
      F[k] -= opt.f.value(v);
      d[k] = -opt.f.derivative(v);
    }
    const SparseOperator J = lap.combine(1.0, d);
    auto w = solve_general(J.matrix(), -F);
    if (!w) {
      rep.status = SolveStatus::breakdown;
      rep.message = "singular Newton system";
      break;
    }
    double theta = 1.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double v = u[in[static_cast<std::size_t>(k)]];
      const double wk = (*w)[k];
      if (v + theta * wk < opt.guard * v) theta = std::min(theta, (opt.guard - 1.0) * v / wk);
    }
    // backtrack on the residual
    Field trial = u;
    double res = INFINITY;
    for (int half = 0; half <= 10; ++half) {
      for (Eigen::Index k = 0; k < m; ++k) trial[in[static_cast<std::size_t>(k)]] = u[in[static_cast<std::size_t>(k)]] + theta * (*w)[k];
      res = residual_norm(lap, trial, opt.f);
      if (res < rep.residual) break;
      if (half < 10) theta *= 0.5;
    }
    u = std::move(trial);
    ++rep.iterations;
    rep.residual = res;
    rep.min_u = interior_min(u);
    rep.residual_history.push_back(res);
    rep.min_history.push_back(rep.min_u);
    if (rep.min_u < opt.floor) {
      rep.status = SolveStatus::collapsed;
      rep.message = "iterate fell below the collapse floor";
      break;
    }
  }
  if (rep.residual <= opt.tol) rep.status = SolveStatus::converged;
  rep.solution = std::move(u);
  return rep;
}

namespace {

Field picard_step(const SparseOperator& lap, const Field& boundary, const Field& u, const Nonlinearity& f,
                  LinearMethod method, bool& ok) {
  const auto& in = u.grid().interior();
  Eigen::VectorXd c(static_cast<Eigen::Index>(in.size()));
  for (std::size_t k = 0; k < in.size(); ++k) c[static_cast<Eigen::Index>(k)] = f.m * std::pow(u[in[k]], -f.alpha - 1.0);
  // (-A + c) v = B phi
  const SparseOperator op = lap.combine(-1.0, c);
  auto v = solve_spd(op, lap.boundary_term(boundary), method);
  ok = v.has_value();
  if (!ok) return u;
  return Field::assemble(boundary, *v);
}

}  // namespace

Field picard_T(const Field& boundary, const Field& u, const Nonlinearity& f, LinearMethod method) {
  if (boundary.grid_ptr() != u.grid_ptr()) throw std::invalid_argument("picard_T: grid mismatch");
  check_boundary(boundary);
  if (!(u.min() > 0.0)) throw std::invalid_argument("picard_T: iterate must be positive");
  const SparseOperator lap = assemble_laplacian(u.grid_ptr());
  bool ok = true;
  Field v = picard_step(lap, boundary, u, f, method, ok);
  if (!ok) throw std::runtime_error("picard_T: linear solve failed");
  return v;
}

SolveReport maximal_solution(const Field& boundary, const MaximalOptions& opt) {
  check_boundary(boundary);
  const GridPtr& grid = boundary.grid_ptr();
  const SparseOperator lap = assemble_laplacian(grid);
  const auto& in = grid->interior();
  const auto m = static_cast<Eigen::Index>(in.size());

  Field v = opt.start ? *opt.start : harmonic_extension(boundary, lap, opt.linear);
  if (v.grid_ptr() != grid) throw std::invalid_argument("maximal_solution: start lives on another grid");
  for (std::size_t i : grid->boundary()) v[i] = boundary[i];
  if (!(v.min() > 0.0)) throw std::invalid_argument("maximal_solution: start must be positive");

  SolveReport rep;
  rep.f = opt.f;
  rep.residual = residual_norm(lap, v, opt.f);
  rep.min_u = interior_min(v);
  rep.residual_history.push_back(rep.residual);
  rep.min_history.push_back(rep.min_u);

  SpdFactor factor;
  while (rep.residual > opt.tol && rep.iterations < opt.max_iter) {
    Field next;
    bool stepped = false;
    if (opt.method == MaximalMethod::monotone_newton) {
      // (-A - alpha m v^{-alpha-1}) v' = -(1 + alpha) m v^{-alpha} + B phi
      Eigen::VectorXd d(m), rhs = lap.boundary_term(boundary);
      for (Eigen::Index k = 0; k < m; ++k) {
        const double x = v[in[static_cast<std::size_t>(k)]];
        d[k] = opt.f.derivative(x);
        rhs[k] -= (1.0 + opt.f.alpha) * opt.f.value(x);
      }
      const SparseOperator op = lap.combine(-1.0, d);
      if (!factor.factorize(op.weighted())) {
        rep.status = SolveStatus::unstable_iterate;
        rep.message = "linearisation at a supersolution is indefinite";
        break;
      }
      Eigen::VectorXd b(m);
      for (Eigen::Index k = 0; k < m; ++k) b[k] = op.weights()[static_cast<std::size_t>(k)] * rhs[k];
      const Eigen::VectorXd x = factor.solve(b);
      // the Newton iterate must stay positive and below v; otherwise take a T step
      bool good = x.allFinite();
      for (Eigen::Index k = 0; good && k < m; ++k) {
        const double old = v[in[static_cast<std::size_t>(k)]];
        good = x[k] > 0.0 && x[k] <= old * (1.0 + 1e-12) + 1e-14;
      }
      if (good) {
        next = Field::assemble(boundary, x);
        stepped = true;
      }
    }
    if (!stepped) {
      bool ok = true;
      next = picard_step(lap, boundary, v, opt.f, opt.linear, ok);
      if (!ok) {
        rep.status = SolveStatus::breakdown;
        rep.message = "linear solve failed";
        break;
      }
    }
    for (std::size_t i : in) rep.max_increase = std::max(rep.max_increase, next[i] - v[i]);
    v = std::move(next);
    ++rep.iterations;
    rep.min_u = interior_min(v);
    rep.residual = residual_norm(lap, v, opt.f);
    rep.residual_history.push_back(rep.residual);
    rep.min_history.push_back(rep.min_u);
    if (rep.min_u < opt.floor) {
      rep.status = SolveStatus::collapsed;
      rep.message = "iterate fell below the collapse floor";
      break;
    }
  }
  if (rep.residual <= opt.tol) rep.status = SolveStatus::converged;
  rep.solution = std::move(v);
  return rep;
}

Field rescale_solution(const Field& u, double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("rescale_solution: C must be positive");
  const Grid& g = u.grid();
  DomainSpec spec = g.domain();
  std::visit(
      [C](auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IntervalDomain>) {
          d.lo /= C;
          d.hi /= C;
        } else if constexpr (std::is_same_v<T, BoxDomain>) {
          for (auto& x : d.lo) x /= C;
          for (auto& x : d.hi) x /= C;
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          d.radius /= C;
        } else {
          d.inner /= C;
          d.outer /= C;
        }
      },
      spec);
  GridPtr scaled = build_grid(spec, g.spacing() / C);
  if (scaled->size() != g.size()) throw std::runtime_error("rescale_solution: scaled grid does not map node to node");
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int a = 0; a < g.axes(); ++a)
      if (std::abs(scaled->coords(i)[a] * C - g.coords(i)[a]) > 1e-9 * g.spacing())
        throw std::runtime_error("rescale_solution: scaled grid does not map node to node");
    v[i] = u[i] / C;
  }
  return Field(std::move(scaled), std::move(v));
}

Field restrict_field(const Field& u, const GridPtr& subgrid) {
  std::vector<double> v(subgrid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto j = u.grid().find_node(subgrid->coords(i));
    if (!j) throw std::invalid_argument("restrict_field: subgrid node is not a grid node");
    v[i] = u[*j];
  }
  return Field(subgrid, std::move(v));
}

SolveReport restrict_and_resolve(const Field& u, const GridPtr& subgrid, const MaximalOptions& options) {
  const Field data = restrict_field(u, subgrid);
  return maximal_solution(data, options);
}

}  // namespace singlab

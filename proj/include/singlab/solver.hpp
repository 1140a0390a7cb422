#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "singlab/grid.hpp"
#include "singlab/linsolve.hpp"

namespace singlab {

/// f(u) = m u^{-alpha}.
struct Nonlinearity {
  double m = 1.0;
  double alpha = 1.0;
  double value(double u) const { return m * std::pow(u, -alpha); }
  double derivative(double u) const { return -alpha * m * std::pow(u, -alpha - 1.0); }
};

enum class SolveStatus {
  converged,
  collapsed,         // min u fell below the floor
  unstable_iterate,  // monotone Newton met an indefinite linearisation
  max_iterations,
  breakdown          // linear solve failed
};

std::string to_string(SolveStatus s);

struct SolveReport {
  Field solution;
  SolveStatus status = SolveStatus::max_iterations;
  std::size_t iterations = 0;
  double residual = INFINITY;
  double min_u = 0.0;
  Nonlinearity f;
  std::vector<double> residual_history;
  std::vector<double> min_history;
  /// Monotone schemes: largest pointwise increase between iterates.
  double max_increase = 0.0;
  std::string message;

  bool converged() const { return status == SolveStatus::converged; }
  /// Collapse, or a failed stability certificate, from a start above every
  /// solution.
  bool nonexistence() const {
    return status == SolveStatus::collapsed || status == SolveStatus::unstable_iterate;
  }
};

/// max over interior nodes of |Delta_h u - f(u)|.
double residual_norm(const SparseOperator& laplacian, const Field& u, const Nonlinearity& f);

struct NewtonOptions {
  Nonlinearity f;
  double tol = 1e-9;
  std::size_t max_iter = 500;
  /// Each iterate keeps u >= guard * (previous u) pointwise.
  double guard = 0.1;
  double floor = 1e-8;
};

/// Damped Newton on Delta_h u = f(u) with the boundary values of
/// `boundary`.  Non-convergence is reported, not thrown.
SolveReport newton_solve(const Field& initial, const Field& boundary, const NewtonOptions& options = {});

/// One step of the monotone map: v solves Delta_h v = m v u^{-alpha-1},
/// v = boundary data.  Fixed points solve Delta_h u = f(u).
Field picard_T(const Field& boundary, const Field& u, const Nonlinearity& f = {},
               LinearMethod method = LinearMethod::direct);

enum class MaximalMethod {
  picard,          // iterate picard_T from the start
  monotone_newton  // Newton steps from above; certifies nonexistence when
                   // -Delta_h - f'(v) loses definiteness
};

struct MaximalOptions {
  Nonlinearity f;
  double tol = 1e-9;
  std::size_t max_iter = 500;
  double floor = 1e-8;
  MaximalMethod method = MaximalMethod::picard;
  LinearMethod linear = LinearMethod::direct;
  /// Supersolution to start from; the harmonic extension when empty.
  std::optional<Field> start;
};

/// Decreasing iteration from a supersolution.  Converges to the maximal
/// solution when one exists; otherwise reports collapse or a failed
/// certificate.
SolveReport maximal_solution(const Field& boundary, const MaximalOptions& options = {});

/// x -> u(C x)/C on the grid scaled by 1/C.  Throws for C <= 0.
Field rescale_solution(const Field& u, double C);

/// Values of u at the nodes of `subgrid`; throws if a node is missing.
Field restrict_field(const Field& u, const GridPtr& subgrid);

/// Maximal solution on `subgrid` with boundary data taken from u.
SolveReport restrict_and_resolve(const Field& u, const GridPtr& subgrid, const MaximalOptions& options = {});

}  // namespace singlab

#pragma once

#include <cstddef>
#include <string>

#include "singlab/grid.hpp"
#include "singlab/solver.hpp"

namespace singlab {

struct SpectralReport {
  double lambda_min = 0.0;
  /// Zero on the boundary, unit norm in the mass inner product.
  Field eigenvector;
  std::size_t iterations = 0;
  std::size_t factorizations = 0;
  /// Mass-weighted norm of A x - lambda x.
  double residual = 0.0;
  /// Rounding floor of the residual for this operator.
  double residual_floor = 0.0;
  double shift = 0.0;
  bool converged = false;
};

/// -Delta_h + diag(f'(u)) on interior nodes; for f = m/u this is
/// -Delta_h - diag(m/u^2).
SparseOperator stability_operator(const Field& u, const Nonlinearity& f = {});

struct EigenOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t max_iter = 2000;
  double initial_shift = -10.0;
};

/// Smallest eigenvalue of a weight-symmetric operator by shifted inverse
/// iteration from the all-ones vector.  A shift that leaves the shifted
/// form indefinite is replaced by 4 * shift until Cholesky succeeds; once
/// the estimate settles, the shift moves up to just below it.  Converged
/// when the residual is below rel_tol |lambda| + abs_tol, or below the
/// rounding floor of the operator when that is larger.
SpectralReport smallest_eigenvalue(const SparseOperator& op, const EigenOptions& options = {});

/// lambda_min(-Delta_h - f'(u)) >= -tol.
bool is_stable(const Field& u, const Nonlinearity& f = {}, double tol = 1e-6,
               SpectralReport* report = nullptr);

/// Discrete form  integral |D zeta|^2 - m integral zeta^2 / u^2 (general f:
/// + integral f'(u) zeta^2).  zeta must vanish on the boundary.
double rayleigh_quotient(const Field& u, const Field& test, const Nonlinearity& f = {});

/// Mass-weighted squared norm of interior values.
double mass_norm2(const Field& test);

struct HardyWitness {
  Field test;
  /// rayleigh_quotient against the cone r/sqrt(n-1), divided by mass_norm2.
  double quotient = 0.0;
  bool negative = false;
  std::string warning;
};

/// zeta = r^{-(n-2)/2} chi(log r), chi a cubic smoothstep ramp rising from
/// the inner collar and falling into the outer one.  Throws for n >= 7 or
/// n < 2, or when the grid is not a radial annulus.
HardyWitness hardy_witness(int n, const GridPtr& annulus);

/// integral (1/2)|Du|^2 + m G(u), G = log u for alpha = 1 and
/// u^{1-alpha}/(1-alpha) otherwise.
double energy(const Field& u, const Nonlinearity& f = {});

/// 1 for |x| <= inner, 0 for |x| >= outer, cubic smoothstep between.
Field smooth_cutoff(const GridPtr& grid, double inner, double outer);

/// phi + chi (eps - phi).
Field cutoff_family(const Field& phi, const Field& chi, double eps);

}  // namespace singlab

#pragma once

// Slow reference implementations for tests.  Nothing in here calls into
// the production integrator, eigensolver or quadrature.

#include <string>
#include <utility>
#include <vector>

#include "singlab/grid.hpp"
#include "singlab/radial.hpp"

namespace singlab::oracle {

struct OracleResult {
  double value = 0.0;
  std::string method;
  std::vector<std::pair<std::string, double>> params;
  double seconds = 0.0;
};

/// Classical RK4 with fixed step (<= 1e-5) from a four-term series start.
/// Near the origin the step is also capped at r/8.  Every step is stored.
/// Throws std::runtime_error if u stops being positive.
RadialProfile integrate_radial(double eps, int n, double m, double r_max, double step = 1e-5);

/// Smallest eigenvalue of the W-symmetric operator (at most 2000 rows):
/// Sturm bisection when tridiagonal, cyclic Jacobi otherwise.
OracleResult dense_eig(const SparseOperator& op);

/// Kahan sum of w_i u_i^p with weights rebuilt from the node positions.
OracleResult quadrature(const Field& u, double exponent);

}  // namespace singlab::oracle

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "singlab/grid.hpp"

namespace singlab {

enum class LinearMethod { direct, conjugate_gradient };

/// Cholesky factor of a symmetric sparse matrix.  Tridiagonal matrices
/// use an O(N) LDL^T sweep; others go through a simplicial LLT whose
/// symbolic analysis is reused while the pattern stays fixed.
class SpdFactor {
 public:
  /// False when the matrix is not positive definite.
  bool factorize(const Eigen::SparseMatrix<double>& k);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool ok() const noexcept { return ok_; }

 private:
  bool ok_ = false;
  bool tri_ = false;
  std::vector<double> diag_, lower_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
  Eigen::Index analyzed_rows_ = -1;
  Eigen::Index analyzed_nnz_ = -1;
};

struct CgResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// p^T K p <= 0 was met: K is not positive definite.
  bool breakdown = false;
};

/// Jacobi-preconditioned conjugate gradients on a symmetric matrix.
/// max_iter == 0 means 10 * rows.
CgResult conjugate_gradient(const Eigen::SparseMatrix<double>& k, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x0, double rel_tol = 1e-12,
                            std::size_t max_iter = 0);

/// Solves op.matrix() x = rhs for an operator whose weighted form is
/// symmetric positive definite.  Returns nullopt when it is not.
std::optional<Eigen::VectorXd> solve_spd(const SparseOperator& op, const Eigen::VectorXd& rhs,
                                         LinearMethod method = LinearMethod::direct);

/// Sparse LU for general (possibly indefinite) systems; nullopt if singular.
std::optional<Eigen::VectorXd> solve_general(const SparseOperator::Matrix& a,
                                             const Eigen::VectorXd& rhs);

/// Harmonic extension: Delta_h v = 0 inside, v = data on the boundary.
Field harmonic_extension(const Field& data, const SparseOperator& laplacian,
                         LinearMethod method = LinearMethod::direct);

}  // namespace singlab

#include "singlab/linsolve.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace singlab {

namespace {

bool is_tridiagonal(const Eigen::SparseMatrix<double>& k) {
  for (Eigen::Index j = 0; j < k.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, j); it; ++it)
      if (std::abs(it.row() - j) > 1) return false;
  return true;
}

}  // namespace

bool SpdFactor::factorize(const Eigen::SparseMatrix<double>& k) {
  ok_ = false;
  tri_ = is_tridiagonal(k);
  if (tri_) {
    const Eigen::Index n = k.rows();
    diag_.assign(static_cast<std::size_t>(n), 0.0);
    lower_.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> a(n, 0.0), b(n, 0.0);  // diagonal, sub-diagonal
    for (Eigen::Index j = 0; j < k.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(k, j); it; ++it) {
        if (it.row() == j) a[j] = it.value();
        else if (it.row() == j + 1) b[j + 1] = it.value();
      }
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = a[i];
      if (i > 0) {
        lower_[i] = b[i] / diag_[i - 1];
        d -= lower_[i] * b[i];
      }
      if (!(d > 0.0)) return false;
      diag_[i] = d;
    }
    ok_ = true;
    return true;
  }
  if (analyzed_rows_ != k.rows() || analyzed_nnz_ != k.nonZeros()) {
    llt_.analyzePattern(k);
    analyzed_rows_ = k.rows();
    analyzed_nnz_ = k.nonZeros();
  }
  llt_.factorize(k);
  ok_ = llt_.info() == Eigen::Success;
  return ok_;
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const {
  if (!ok_) throw std::logic_error("SpdFactor::solve: no valid factorization");
  if (!tri_) return llt_.solve(rhs);
  const auto n = static_cast<Eigen::Index>(diag_.size());
  Eigen::VectorXd x = rhs;
  for (Eigen::Index i = 1; i < n; ++i) x[i] -= lower_[i] * x[i - 1];
  for (Eigen::Index i = 0; i < n; ++i) x[i] /= diag_[i];
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= lower_[i + 1] * x[i + 1];
  return x;
}

CgResult conjugate_gradient(const Eigen::SparseMatrix<double>& k, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x0, double rel_tol, std::size_t max_iter) {
  const Eigen::Index n = k.rows();
  if (max_iter == 0) max_iter = static_cast<std::size_t>(10 * n);
  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = k.coeff(i, i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }
  CgResult out;
  out.x = x0;
  Eigen::VectorXd r = b - k * out.x;
  const double bnorm = b.norm() > 0.0 ? b.norm() : 1.0;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  out.relative_residual = r.norm() / bnorm;
  while (out.relative_residual > rel_tol && out.iterations < max_iter) {
    const Eigen::VectorXd kp = k * p;
    const double pkp = p.dot(kp);
    if (!(pkp > 0.0)) {
      out.breakdown = true;
      return out;
    }
    const double alpha = rz / pkp;
    out.x += alpha * p;
    r -= alpha * kp;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    ++out.iterations;
    out.relative_residual = r.norm() / bnorm;
  }
  out.converged = out.relative_residual <= rel_tol;
  return out;
}

std::optional<Eigen::VectorXd> solve_spd(const SparseOperator& op, const Eigen::VectorXd& rhs,
                                         LinearMethod method) {
  const Eigen::SparseMatrix<double> k = op.weighted();
  Eigen::VectorXd b(rhs.size());
  for (Eigen::Index i = 0; i < rhs.size(); ++i) b[i] = op.weights()[static_cast<std::size_t>(i)] * rhs[i];
  if (method == LinearMethod::conjugate_gradient) {
    auto res = conjugate_gradient(k, b, Eigen::VectorXd::Zero(rhs.size()));
    if (res.breakdown || !res.converged) return std::nullopt;
    return res.x;
  }
  SpdFactor f;
  if (!f.factorize(k)) return std::nullopt;
  return f.solve(b);
}

std::optional<Eigen::VectorXd> solve_general(const SparseOperator::Matrix& a, const Eigen::VectorXd& rhs) {
  Eigen::SparseMatrix<double> m = a;
  m.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return std::nullopt;
  return x;
}

Field harmonic_extension(const Field& data, const SparseOperator& laplacian, LinearMethod method) {
  // -A v_I = B v_boundary
  const SparseOperator neg = laplacian.combine(-1.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(laplacian.size())));
  const Eigen::VectorXd rhs = laplacian.boundary_term(data);
  auto v = solve_spd(neg, rhs, method);
  if (!v) throw std::runtime_error("harmonic_extension: Laplacian solve failed");
  return Field::assemble(data, *v);
}

}  // namespace singlab

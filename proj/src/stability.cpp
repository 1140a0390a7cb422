#include "singlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "singlab/linsolve.hpp"

namespace singlab {

namespace {

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

void require_positive(const Field& u, const char* what) {
  for (std::size_t i : u.grid().interior())
    if (!(u[i] > 0.0)) throw std::invalid_argument(std::string(what) + ": field must be positive");
}

}  // namespace

SparseOperator stability_operator(const Field& u, const Nonlinearity& f) {
  require_positive(u, "stability_operator");
  const SparseOperator lap = assemble_laplacian(u.grid_ptr());
  const auto& in = u.grid().interior();
  Eigen::VectorXd d(static_cast<Eigen::Index>(in.size()));
  for (std::size_t k = 0; k < in.size(); ++k) d[static_cast<Eigen::Index>(k)] = f.derivative(u[in[k]]);
  return lap.combine(-1.0, d);
}

SpectralReport smallest_eigenvalue(const SparseOperator& op, const EigenOptions& opt) {
  const auto n = static_cast<Eigen::Index>(op.size());
  if (n == 0) throw std::invalid_argument("smallest_eigenvalue: empty operator");
  const Eigen::SparseMatrix<double> K = op.weighted();
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = op.weights()[static_cast<std::size_t>(i)];
  Eigen::SparseMatrix<double> W(n, n);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, w[i]);
    W.setFromTriplets(t.begin(), t.end());
  }
  const SparseOperator::Matrix& A = op.matrix();

  auto wnorm = [&](const Eigen::VectorXd& x) { return std::sqrt(x.dot(w.cwiseProduct(x))); };

  SpectralReport rep;
  SpdFactor factor;
  double sigma = opt.initial_shift;
  auto try_shift = [&](double s) {
    ++rep.factorizations;
    const Eigen::SparseMatrix<double> M = K - s * W;
    return factor.factorize(M);
  };
  for (int attempt = 0; !try_shift(sigma); ++attempt) {
    if (attempt > 60) throw std::runtime_error("smallest_eigenvalue: no admissible shift found");
    sigma = sigma < 0.0 ? 4.0 * sigma : -10.0;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= wnorm(x);
  double lambda = x.dot(K * x);
  double prev = lambda;
  int refinements_failed = 0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (rep.iterations = 1; rep.iterations <= opt.max_iter; ++rep.iterations) {
    Eigen::VectorXd y = factor.solve(w.cwiseProduct(x));
    x = y / wnorm(y);
    lambda = x.dot(K * x);
    const Eigen::VectorXd ax = A * x;
    const Eigen::VectorXd r = ax - lambda * x;
    rep.residual = wnorm(r);
    Eigen::VectorXd fl(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = std::abs(lambda * x[i]);
      for (SparseOperator::Matrix::InnerIterator it(A, i); it; ++it) s += std::abs(it.value() * x[it.col()]);
      fl[i] = 16.0 * eps * s;
    }
    rep.residual_floor = wnorm(fl);
    if (rep.residual <= std::max(opt.rel_tol * std::abs(lambda) + opt.abs_tol, rep.residual_floor)) {
      rep.converged = true;
      break;
    }
    // move the shift up under the settled estimate
    const double gap = std::max(1e-2 * std::abs(lambda), 1e-2);
    const bool settled = std::abs(lambda - prev) <= 1e-4 * std::max(1.0, std::abs(lambda));
    if (settled && lambda - sigma > 2.0 * gap && refinements_failed < 5) {
      const double trial = lambda - gap;
      if (try_shift(trial)) {
        sigma = trial;
      } else {
        ++refinements_failed;
        if (!try_shift(sigma)) throw std::runtime_error("smallest_eigenvalue: lost factorization");
      }
    }
    prev = lambda;
  }
  if (rep.iterations > opt.max_iter) rep.iterations = opt.max_iter;
  rep.lambda_min = lambda;
  rep.shift = sigma;
  // fix the sign so the eigenvector is positive on average
  if (x.sum() < 0.0) x = -x;
  std::vector<double> v(op.grid().size(), 0.0);
  const auto& in = op.grid().interior();
  for (std::size_t k = 0; k < in.size(); ++k) v[in[k]] = x[static_cast<Eigen::Index>(k)];
  rep.eigenvector = Field(op.grid_ptr(), std::move(v));
  return rep;
}

bool is_stable(const Field& u, const Nonlinearity& f, double tol, SpectralReport* report) {
  SpectralReport r = smallest_eigenvalue(stability_operator(u, f));
  const bool stable = r.lambda_min >= -tol;
  if (report) *report = std::move(r);
  return stable;
}

double mass_norm2(const Field& test) {
  double s = 0.0;
  for (std::size_t i : test.grid().interior()) s += test.grid().mass(i) * test[i] * test[i];
  return s;
}

double rayleigh_quotient(const Field& u, const Field& test, const Nonlinearity& f) {
  if (u.grid_ptr() != test.grid_ptr()) throw std::invalid_argument("rayleigh_quotient: grid mismatch");
  for (std::size_t i : test.grid().boundary())
    if (test[i] != 0.0) throw std::invalid_argument("rayleigh_quotient: test field must vanish on the boundary");
  require_positive(u, "rayleigh_quotient");
  double q = 2.0 * dirichlet_energy(test);
  for (std::size_t i : test.grid().interior()) q += test.grid().mass(i) * f.derivative(u[i]) * test[i] * test[i];
  return q;
}

HardyWitness hardy_witness(int n, const GridPtr& annulus) {
  if (n >= 7) throw std::invalid_argument("hardy_witness: requires n <= 6 (the cone is stable for n >= 7)");
  if (n < 2) throw std::invalid_argument("hardy_witness: requires n >= 2");
  if (annulus->kind() != GridKind::radial || annulus->has_center() || annulus->dim() != n)
    throw std::invalid_argument("hardy_witness: needs a radial annulus grid of dimension n");
  const double h = annulus->spacing();
  const double sa = std::log(annulus->first_radius() + 2.0 * h);
  const double sd = std::log(annulus->outer_radius());
  if (!(sd > sa)) throw std::invalid_argument("hardy_witness: annulus too thin");
  const double L = std::min(2.0, (sd - sa) / 3.0);
  const double power = -(n - 2) / 2.0;
  std::vector<double> v(annulus->size(), 0.0);
  for (std::size_t i : annulus->interior()) {
    const double r = annulus->radius(i);
    const double s = std::log(r);
    const double chi = std::min(smoothstep((s - sa) / L), smoothstep((sd - s) / L));
    v[i] = std::pow(r, power) * chi;
  }
  HardyWitness out;
  out.test = Field(annulus, std::move(v));
  const double c = 1.0 / std::sqrt(n - 1.0);
  const Field cone = Field::from_radius(annulus, [c](double r) { return c * r; });
  out.quotient = rayleigh_quotient(cone, out.test) / mass_norm2(out.test);
  out.negative = out.quotient < 0.0;
  if (!out.negative) out.warning = "annulus too shallow: witness quotient is not negative";
  return out;
}

double energy(const Field& u, const Nonlinearity& f) {
  for (double x : u.values())
    if (!(x > 0.0)) throw std::invalid_argument("energy: field must be positive");
  std::vector<double> g(u.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = f.alpha == 1.0 ? std::log(u[i]) : std::pow(u[i], 1.0 - f.alpha) / (1.0 - f.alpha);
  return dirichlet_energy(u) + f.m * integrate_values(u.grid(), g);
}

Field smooth_cutoff(const GridPtr& grid, double inner, double outer) {
  if (!(outer > inner) || inner < 0.0) throw std::invalid_argument("smooth_cutoff: need 0 <= inner < outer");
  return Field::from_radius(grid, [=](double r) { return smoothstep((outer - r) / (outer - inner)); });
}

Field cutoff_family(const Field& phi, const Field& chi, double eps) {
  if (phi.grid_ptr() != chi.grid_ptr()) throw std::invalid_argument("cutoff_family: grid mismatch");
  Field out = phi;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi[i] + chi[i] * (eps - phi[i]);
  return out;
}

}  // namespace singlab

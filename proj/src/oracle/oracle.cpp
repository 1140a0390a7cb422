#include "singlab/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace singlab::oracle {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// |S^{n-1}| by the two-step recursion.
double sphere(int n) {
  double s = n % 2 == 1 ? 2.0 : 2.0 * std::numbers::pi;
  for (int k = n % 2 == 1 ? 3 : 4; k <= n; k += 2) s *= 2.0 * std::numbers::pi / (k - 2);
  return s;
}

struct State {
  double u, v;
};

State rhs(double r, State y, int n, double m) { return {y.v, m / y.u - (n - 1) * y.v / r}; }

}  // namespace

RadialProfile integrate_radial(double eps, int n, double m, double r_max, double step) {
  if (!(eps > 0.0) || n < 1 || !(r_max > 0.0)) throw std::invalid_argument("oracle::integrate_radial: bad arguments");
  if (!(step > 0.0) || step > 1e-5) throw std::invalid_argument("oracle::integrate_radial: step must lie in (0, 1e-5]");
  // u = eps + a r^2 + b r^4 + c r^6
  const double a = m / (2.0 * n * eps);
  const double b = -m * a / (4.0 * (n + 2) * eps * eps);
  const double c = m / eps * (a * a / (eps * eps) - b / eps) / (6.0 * (n + 4));
  double r = std::min(step, 1e-2 * eps);
  const double r2 = r * r;
  State y{eps + r2 * (a + r2 * (b + r2 * c)), r * (2 * a + r2 * (4 * b + 6 * c * r2))};

  RadialProfile p;
  p.dim = n;
  p.m = m;
  p.eps = eps;
  p.tolerance = step;
  p.method = "oracle-rk4-fixed";
  auto store = [&] {
    p.r.push_back(r);
    p.u.push_back(y.u);
    p.du.push_back(y.v);
  };
  store();
  while (r < r_max) {
    double hk = std::min(step, r / 8.0);
    if (r + hk > r_max || r_max - (r + hk) < 1e-3 * hk) hk = r_max - r;
    const State k1 = rhs(r, y, n, m);
    const State k2 = rhs(r + hk / 2, {y.u + hk / 2 * k1.u, y.v + hk / 2 * k1.v}, n, m);
    const State k3 = rhs(r + hk / 2, {y.u + hk / 2 * k2.u, y.v + hk / 2 * k2.v}, n, m);
    const State k4 = rhs(r + hk, {y.u + hk * k3.u, y.v + hk * k3.v}, n, m);
    y.u += hk / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    y.v += hk / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    r = (r_max - r == hk) ? r_max : r + hk;
    if (!(y.u > 0.0)) throw std::runtime_error("oracle::integrate_radial: lost positivity");
    ++p.accepted;
    store();
  }
  return p;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

OracleResult dense_eig(const SparseOperator& op) {
  const auto t0 = Clock::now();
  const std::size_t N = op.size();
  if (N == 0) throw std::invalid_argument("oracle::dense_eig: empty operator");
  if (N > 2000) throw std::invalid_argument("oracle::dense_eig: more than 2000 rows");
  std::vector<double> s(N * N, 0.0);
  std::vector<double> sw(N);
  for (std::size_t i = 0; i < N; ++i) sw[i] = std::sqrt(op.weights()[i]);
  const auto& A = op.matrix();
  for (Eigen::Index i = 0; i < A.outerSize(); ++i)
    for (SparseOperator::Matrix::InnerIterator it(A, i); it; ++it) {
      const auto row = static_cast<std::size_t>(it.row()), col = static_cast<std::size_t>(it.col());
      s[row * N + col] = sw[row] * it.value() / sw[col];
    }
  // symmetrize away rounding
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) s[i * N + j] = s[j * N + i] = 0.5 * (s[i * N + j] + s[j * N + i]);

  bool tri = true;
  for (std::size_t i = 0; i < N && tri; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (j + 1 < i || j > i + 1) {
        if (s[i * N + j] != 0.0) {
          tri = false;
          break;
        }
      }

  OracleResult out;
  if (tri) {
    std::vector<double> d(N), e(N > 0 ? N - 1 : 0);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < N; ++i) {
      d[i] = s[i * N + i];
      if (i + 1 < N) e[i] = s[i * N + i + 1];
      const double rad = (i > 0 ? std::abs(s[i * N + i - 1]) : 0.0) + (i + 1 < N ? std::abs(s[i * N + i + 1]) : 0.0);
      lo = std::min(lo, d[i] - rad);
      hi = std::max(hi, d[i] + rad);
    }
    int it = 0;
    for (; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      if (sturm_count(d, e, mid) >= 1) hi = mid;
      else lo = mid;
    }
    out.value = 0.5 * (lo + hi);
    out.method = "oracle-sturm-bisection";
    out.params = {{"rows", static_cast<double>(N)}, {"bisections", static_cast<double>(it)}};
  } else {
    double total = 0.0;
    for (double x : s) total += x * x;
    int sweep = 0;
    for (; sweep < 100; ++sweep) {
      double off = 0.0;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          if (i != j) off += s[i * N + j] * s[i * N + j];
      if (off <= 1e-30 * total) break;
      for (std::size_t p = 0; p + 1 < N; ++p)
        for (std::size_t q = p + 1; q < N; ++q) {
          const double apq = s[p * N + q];
          if (apq == 0.0) continue;
          const double theta = (s[q * N + q] - s[p * N + p]) / (2.0 * apq);
          const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
          for (std::size_t k = 0; k < N; ++k) {
            const double akp = s[k * N + p], akq = s[k * N + q];
            s[k * N + p] = c * akp - sn * akq;
            s[k * N + q] = sn * akp + c * akq;
          }
          for (std::size_t k = 0; k < N; ++k) {
            const double apk = s[p * N + k], aqk = s[q * N + k];
            s[p * N + k] = c * apk - sn * aqk;
            s[q * N + k] = sn * apk + c * aqk;
          }
        }
    }
    out.value = INFINITY;
    for (std::size_t i = 0; i < N; ++i) out.value = std::min(out.value, s[i * N + i]);
    out.method = "oracle-cyclic-jacobi";
    out.params = {{"rows", static_cast<double>(N)}, {"sweeps", static_cast<double>(sweep)}};
  }
  out.seconds = seconds_since(t0);
  return out;
}

OracleResult quadrature(const Field& u, double exponent) {
  const auto t0 = Clock::now();
  const Grid& g = u.grid();
  if (g.size() > 1000000) throw std::invalid_argument("oracle::quadrature: more than 1e6 nodes");
  const double h = g.spacing();
  const int n = g.dim();
  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w;
    if (g.kind() == GridKind::radial) {
      const double r = g.radius(i);
      w = sphere(n) * h * std::pow(r, n - 1);
      if (i == 0 || i + 1 == g.size()) w /= 2;
      if (i == 0 && g.has_center()) w += sphere(n) * std::pow(r, n) / n;
    } else if (g.kind() == GridKind::ball) {
      w = g.is_boundary(i) ? 0.0 : std::pow(h, n);
    } else {
      w = std::pow(h, n);
      for (int a = 0; a < g.axes(); ++a)
        for (int side = 0; side < 2; ++side)
          if (g.neighbor(i, a, side) < 0) w /= 2;
    }
    if (w == 0.0) continue;
    add(w * (exponent == 1.0 ? u[i] : std::pow(u[i], exponent)));
  }
  OracleResult out;
  out.value = sum;
  out.method = "oracle-kahan-sum";
  out.params = {{"nodes", static_cast<double>(g.size())}, {"exponent", exponent}};
  out.seconds = seconds_since(t0);
  return out;
}

}  // namespace singlab::oracle

#include "singlab/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace singlab {

namespace {

using State = std::array<double, 2>;

State rhs(double r, const State& y, int n, double m) {
  return {y[1], m / y[0] - (n - 1) * y[1] / r};
}

// Fehlberg 4(5) tableau
constexpr double A21 = 1.0 / 4;
constexpr double A31 = 3.0 / 32, A32 = 9.0 / 32;
constexpr double A41 = 1932.0 / 2197, A42 = -7200.0 / 2197, A43 = 7296.0 / 2197;
constexpr double A51 = 439.0 / 216, A52 = -8.0, A53 = 3680.0 / 513, A54 = -845.0 / 4104;
constexpr double A61 = -8.0 / 27, A62 = 2.0, A63 = -3544.0 / 2565, A64 = 1859.0 / 4104, A65 = -11.0 / 40;
constexpr double B41 = 25.0 / 216, B43 = 1408.0 / 2565, B44 = 2197.0 / 4104, B45 = -1.0 / 5;
constexpr double B51 = 16.0 / 135, B53 = 6656.0 / 12825, B54 = 28561.0 / 56430, B55 = -9.0 / 50,
                 B56 = 2.0 / 55;

struct StepResult {
  State y4;
  double error;
};

StepResult fehlberg_step(double r, const State& y, double s, int n, double m) {
  auto add = [](const State& a, double c1, const State& k1) { return State{a[0] + c1 * k1[0], a[1] + c1 * k1[1]}; };
  const State k1 = rhs(r, y, n, m);
  const State k2 = rhs(r + s / 4, add(y, s * A21, k1), n, m);
  State t;
  t = {y[0] + s * (A31 * k1[0] + A32 * k2[0]), y[1] + s * (A31 * k1[1] + A32 * k2[1])};
  const State k3 = rhs(r + 3 * s / 8, t, n, m);
  t = {y[0] + s * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]), y[1] + s * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1])};
  const State k4 = rhs(r + 12 * s / 13, t, n, m);
  t = {y[0] + s * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
       y[1] + s * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1])};
  const State k5 = rhs(r + s, t, n, m);
  t = {y[0] + s * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0]),
       y[1] + s * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1])};
  const State k6 = rhs(r + s / 2, t, n, m);
  StepResult out;
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double y4 = y[i] + s * (B41 * k1[i] + B43 * k3[i] + B44 * k4[i] + B45 * k5[i]);
    const double y5 = y[i] + s * (B51 * k1[i] + B53 * k3[i] + B54 * k4[i] + B55 * k5[i] + B56 * k6[i]);
    out.y4[i] = y4;
    err = std::max(err, std::abs(y5 - y4) / (1.0 + std::abs(y4)));
  }
  out.error = err;
  return out;
}

double hermite(double r0, double u0, double d0, double r1, double u1, double d1, double r) {
  const double h = r1 - r0;
  const double t = (r - r0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * h * d1;
}

std::vector<double> log_space(const EpsWindow& w) {
  if (!(w.lo > 0.0) || !(w.hi > w.lo) || w.samples < 3)
    throw std::invalid_argument("eps window must satisfy 0 < lo < hi with at least 3 samples");
  std::vector<double> e(static_cast<std::size_t>(w.samples));
  const double a = std::log(w.lo), b = std::log(w.hi);
  for (int i = 0; i < w.samples; ++i) e[i] = std::exp(a + (b - a) * i / (w.samples - 1));
  e.front() = w.lo;
  e.back() = w.hi;
  return e;
}

// Golden-section search on log eps; sign = +1 for a minimum, -1 for a maximum.
std::pair<double, double> golden(int n, double m, double tol, double xa, double xb, double sign) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double x) { return sign * shooting_map(n, m, std::exp(x), tol); };
  double c = xb - g * (xb - xa), d = xa + g * (xb - xa);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (xb - xa) > 1e-9; ++it) {
    if (fc < fd) {
      xb = d;
      d = c;
      fd = fc;
      c = xb - g * (xb - xa);
      fc = f(c);
    } else {
      xa = c;
      c = d;
      fc = fd;
      d = xa + g * (xb - xa);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{std::exp(c), sign * fc} : std::pair{std::exp(d), sign * fd};
}

}  // namespace

double RadialProfile::value_at(double radius) const {
  if (r.empty()) throw std::logic_error("value_at: empty profile");
  if (radius < r.front() || radius > r.back() * (1 + 1e-14))
    throw std::out_of_range("value_at: radius outside the integrated range");
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  if (it == r.end()) return u.back();
  const std::size_t j = static_cast<std::size_t>(it - r.begin());
  const std::size_t i = j - 1;
  if (radius == r[i]) return u[i];
  return hermite(r[i], u[i], du[i], r[j], u[j], du[j], radius);
}

std::pair<double, double> series_start(double eps, int n, double m, double r0) {
  if (!(eps > 0.0) || n < 1) throw std::invalid_argument("series_start: needs eps > 0 and n >= 1");
  const double a = m / (2.0 * n * eps);
  if (!(r0 >= 0.0) || a * r0 * r0 >= 0.1 * eps)
    throw std::invalid_argument("series_start: r0 outside the expansion's validity window");
  const double b = -m * m / (8.0 * n * (n + 2) * eps * eps * eps);
  const double r2 = r0 * r0;
  return {eps + a * r2 + b * r2 * r2, 2 * a * r0 + 4 * b * r2 * r0};
}

double series_radius(double eps) { return 1e-3 * std::min(eps, 1.0); }

RadialProfile integrate_radial(double eps, int n, double m, double r_max, double tol,
                               std::span<const double> stations) {
  if (!(eps > 0.0)) throw std::invalid_argument("integrate_radial: eps must be positive");
  if (n < 1) throw std::invalid_argument("integrate_radial: dimension must be positive");
  if (!(r_max > 0.0)) throw std::invalid_argument("integrate_radial: r_max must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_radial: tolerance must be positive");

  std::vector<double> st(stations.begin(), stations.end());
  std::sort(st.begin(), st.end());
  st.erase(std::unique(st.begin(), st.end()), st.end());
  st.erase(std::remove_if(st.begin(), st.end(), [&](double s) { return !(s > 0.0) || s > r_max; }), st.end());

  RadialProfile p;
  p.dim = n;
  p.m = m;
  p.eps = eps;
  p.tolerance = tol;
  p.method = "rkf45-adaptive";
  auto push = [&](double r, double u, double d) {
    p.r.push_back(r);
    p.u.push_back(u);
    p.du.push_back(d);
  };
  push(0.0, eps, 0.0);

  const double r0 = std::min(series_radius(eps), r_max);
  std::size_t next = 0;
  while (next < st.size() && st[next] < r0) {
    auto [u, d] = series_start(eps, n, m, st[next]);
    push(st[next], u, d);
    ++next;
  }
  auto [u0, d0] = series_start(eps, n, m, r0);
  push(r0, u0, d0);
  if (next < st.size() && st[next] == r0) ++next;

  double r = r0;
  State y{u0, d0};
  const double h_max = r_max / 100.0;
  double step = std::min(r0, h_max);
  while (r < r_max) {
    double s = std::min({step, h_max, r_max - r});
    bool at_station = false;
    if (next < st.size() && r + s >= st[next]) {
      s = st[next] - r;
      at_station = true;
    }
    if (s < 16 * std::numeric_limits<double>::epsilon() * r)
      throw std::runtime_error("integrate_radial: step size underflow");
    const StepResult res = fehlberg_step(r, y, s, n, m);
    const double allowed = tol * s;
    if (!std::isfinite(res.error) || res.error > allowed) {
      ++p.rejected;
      const double fac = std::isfinite(res.error) ? 0.9 * std::pow(allowed / res.error, 0.25) : 0.2;
      step = s * std::clamp(fac, 0.2, 0.9);
      continue;
    }
    ++p.accepted;
    r = at_station ? st[next] : (r_max - r - s <= 1e-15 * r_max ? r_max : r + s);
    if (at_station) ++next;
    y = res.y4;
    if (!(y[0] > 0.0)) throw std::runtime_error("integrate_radial: solution lost positivity");
    push(r, y[0], y[1]);
    const double fac = res.error > 0.0 ? 0.9 * std::pow(allowed / res.error, 0.25) : 5.0;
    // a step clipped at a station keeps the natural step size
    if (!(at_station && fac >= 1.0)) step = s * std::clamp(fac, 0.2, 5.0);
  }
  return p;
}

double shooting_map(int n, double m, double eps, double tol) {
  return integrate_radial(eps, n, m, 1.0, tol).end_value();
}

ShootingScan scan_shooting_map(int n, double m, const EpsWindow& window, double tol) {
  ShootingScan s;
  s.dim = n;
  s.m = m;
  s.window = window;
  s.eps = log_space(window);
  s.value.reserve(s.eps.size());
  for (double e : s.eps) s.value.push_back(shooting_map(n, m, e, tol));
  return s;
}

std::vector<RadialProfile> solve_dirichlet_radial(int n, double m, double C, const EpsWindow& window,
                                                  double root_tol, double tol) {
  if (!(C > 0.0)) throw std::invalid_argument("solve_dirichlet_radial: boundary value must be positive");
  const ShootingScan scan = scan_shooting_map(n, m, window, tol);
  std::vector<double> roots;
  const auto& e = scan.eps;
  std::vector<double> g(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) g[i] = scan.value[i] - C;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (g[i] == 0.0) {
      roots.push_back(e[i]);
      continue;
    }
    if (i + 1 == e.size() || g[i + 1] == 0.0 || (g[i] > 0) == (g[i + 1] > 0)) continue;
    // Illinois iteration on log eps
    double xa = std::log(e[i]), xb = std::log(e[i + 1]);
    double fa = g[i], fb = g[i + 1];
    double x = xa, fx = fa;
    int side = 0;
    for (int it = 0; it < 200; ++it) {
      x = (xa * fb - xb * fa) / (fb - fa);
      fx = shooting_map(n, m, std::exp(x), tol) - C;
      if (std::abs(fx) <= root_tol || std::abs(xb - xa) <= 1e-14 * (1 + std::abs(x))) break;
      if ((fx > 0) == (fb > 0)) {
        xb = x;
        fb = fx;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        xa = x;
        fa = fx;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    roots.push_back(std::exp(x));
  }
  std::vector<RadialProfile> out;
  out.reserve(roots.size());
  for (double r : roots) out.push_back(integrate_radial(r, n, m, 1.0, tol));
  return out;
}

BifurcationConstants bifurcation_constants(int n, double m, const EpsWindow& window, double tol) {
  BifurcationConstants b;
  b.dim = n;
  b.m = m;
  b.window = window;
  b.scan = scan_shooting_map(n, m, window, tol);
  const auto& e = b.scan.eps;
  const auto& S = b.scan.value;
  const std::size_t N = S.size();
  auto log_e = [&](std::size_t i) { return std::log(e[i]); };

  const std::size_t imin = static_cast<std::size_t>(std::min_element(S.begin(), S.end()) - S.begin());
  b.c1 = S[imin];
  b.eps_c1 = e[imin];
  if (imin == 0 || imin + 1 == N) {
    b.c1_on_window_edge = true;
    b.warnings.push_back("minimum of the shooting map lies on the window boundary");
  } else {
    auto [x, v] = golden(n, m, tol, log_e(imin - 1), log_e(imin + 1), 1.0);
    if (v < b.c1) {
      b.c1 = v;
      b.eps_c1 = x;
    }
  }

  std::size_t last_min = 0;
  bool any_extremum = false;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const bool is_min = S[i] < S[i - 1] && S[i] <= S[i + 1];
    const bool is_max = S[i] > S[i - 1] && S[i] >= S[i + 1];
    if (is_min) last_min = i;
    any_extremum = any_extremum || is_min || is_max;
  }
  if (!any_extremum || last_min == 0) {
    b.monotone = !any_extremum;
    b.c2 = b.c1;
    b.eps_c2 = b.eps_c1;
    b.c2_on_window_edge = b.c1_on_window_edge;
    return b;
  }
  std::size_t imax = 0;
  for (std::size_t i = 0; i < last_min; ++i)
    if (S[i] > S[imax]) imax = i;
  b.c2 = S[imax];
  b.eps_c2 = e[imax];
  if (imax == 0) {
    b.c2_on_window_edge = true;
    b.warnings.push_back("multiplicity level is attained on the window boundary");
  } else {
    auto [x, v] = golden(n, m, tol, log_e(imax - 1), log_e(imax + 1), -1.0);
    if (v > b.c2) {
      b.c2 = v;
      b.eps_c2 = x;
    }
  }
  return b;
}

double conical_deviation(const RadialProfile& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.r.size(); ++i) d = std::max(d, std::abs(p.u[i] - p.r[i]));
  return d;
}

double weighted_deviation(const Field& u, double rate, double rho) {
  const Grid& g = u.grid();
  if (!(rho > 0.0)) throw std::invalid_argument("weighted_deviation: radius must be positive");
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    rmin = std::min(rmin, g.radius(i));
    rmax = std::max(rmax, g.radius(i));
  }
  if (g.kind() == GridKind::radial && g.has_center()) rmin = 0.0;
  const double slack = 1e-12 * rho;
  if (rho < rmin - slack || 2 * rho > rmax + slack)
    throw std::invalid_argument("weighted_deviation: annulus [r, 2r] not covered by the grid");
  double sup = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.radius(i);
    if (r < rho - slack || r > 2 * rho + slack) continue;
    any = true;
    sup = std::max(sup, std::abs(u[i] - r));
  }
  if (!any) throw std::invalid_argument("weighted_deviation: no nodes in [r, 2r]");
  return sup / std::pow(rho, rate);
}

Field sample_profile(const GridPtr& grid, double eps, double m, double tol) {
  if (grid->kind() != GridKind::radial) throw std::invalid_argument("sample_profile: radial grid required");
  std::vector<double> radii(grid->size());
  for (std::size_t i = 0; i < radii.size(); ++i) radii[i] = grid->radius(i);
  const RadialProfile p = integrate_radial(eps, grid->dim(), m, grid->outer_radius(), tol, radii);
  std::vector<double> v(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) v[i] = p.value_at(radii[i]);
  return Field(grid, std::move(v));
}

}  // namespace singlab

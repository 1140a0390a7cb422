#include "singlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace singlab {

bool Check::recompute() const {
  if (!std::isfinite(value) && !(value < 0 && relation == Relation::at_most)) return false;
  return relation == Relation::at_least ? value >= bound : value <= bound;
}

double Check::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  throw std::out_of_range("Check::param: no parameter " + key);
}

bool EstimateReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void EstimateReport::append(const EstimateReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

double larger_root(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0 || a == 0.0) throw std::domain_error("larger_root: no real roots");
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double r1 = q / a;
  const double r2 = q != 0.0 ? c / q : r1;
  return std::max(r1, r2);
}

double p_threshold() { return 2.0 * larger_root(1.0, -2.0, -1.0) + 2.0; }

double stability_dimension_threshold() { return larger_root(1.0, -8.0, 8.0); }

namespace {

Check finish(Check c) {
  c.pass = c.recompute();
  return c;
}

// Integral of S f(u(r)) r^{n-1} over [a, b] with u linear between nodes.
double radial_segment(const Field& u, double a, double b, double (*f)(double)) {
  const Grid& g = u.grid();
  const int n = g.dim();
  auto value = [&](double r) {
    if (r <= g.radius(0)) return u[0];
    if (r >= g.outer_radius()) return u[g.size() - 1];
    const double q = (r - g.radius(0)) / g.spacing();
    std::size_t i = std::min(static_cast<std::size_t>(q), g.size() - 2);
    const double t = (r - g.radius(i)) / (g.radius(i + 1) - g.radius(i));
    return (1 - t) * u[i] + t * u[i + 1];
  };
  std::vector<double> pts{a};
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.radius(i) > a && g.radius(i) < b) pts.push_back(g.radius(i));
  pts.push_back(b);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double r0 = pts[k], r1 = pts[k + 1];
    s += 0.5 * (r1 - r0) * (f(value(r0)) * std::pow(r0, n - 1) + f(value(r1)) * std::pow(r1, n - 1));
  }
  return unit_sphere_area(n) * s;
}

double dist(const Grid& g, std::size_t i, const std::vector<double>& c) {
  if (g.kind() == GridKind::radial) return g.radius(i);
  double s = 0.0;
  for (int a = 0; a < g.axes(); ++a) {
    const double d = g.coords(i)[a] - c[static_cast<std::size_t>(a)];
    s += d * d;
  }
  return std::sqrt(s);
}

void require_inside(const Grid& g, const std::vector<double>& c, double radius) {
  const double slack = 1e-12 * std::max(1.0, radius);
  if (g.kind() == GridKind::radial) {
    if (!g.has_center()) throw std::invalid_argument("ball must lie inside the grid (annulus has a hole)");
    for (double x : c)
      if (x != 0.0) throw std::invalid_argument("radial grids only support balls centred at the origin");
    if (radius > g.outer_radius() + slack) throw std::invalid_argument("ball extends beyond the grid");
    return;
  }
  if (static_cast<int>(c.size()) != g.axes()) throw std::invalid_argument("centre has the wrong dimension");
  if (g.kind() == GridKind::ball) {
    double s = 0.0;
    for (double x : c) s += x * x;
    if (std::sqrt(s) + radius > g.outer_radius() + slack) throw std::invalid_argument("ball extends beyond the grid");
    return;
  }
  const auto lo = g.lower(), hi = g.upper();
  for (int a = 0; a < g.axes(); ++a)
    if (c[a] - radius < lo[a] - slack || c[a] + radius > hi[a] + slack)
      throw std::invalid_argument("ball extends beyond the grid");
}

}  // namespace

EstimateReport positivity_check(const Field& u, const std::vector<double>& center, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("positivity_check: rho must be positive");
  const Grid& g = u.grid();
  std::vector<double> c = center;
  if (c.empty()) c.assign(static_cast<std::size_t>(g.axes()), 0.0);
  require_inside(g, c, 2.0 * rho);
  const int n = g.dim();

  double shell = 0.0;
  std::size_t shell_nodes = 0;
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = dist(g, i, c);
    if (d <= 2.0 * rho * (1 + 1e-12)) sup = std::max(sup, u[i]);
    if (d >= rho && d <= 2.0 * rho) ++shell_nodes;
  }
  if (g.kind() == GridKind::radial) {
    shell = radial_segment(u, rho, 2.0 * rho, [](double x) { return x * x; });
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = dist(g, i, c);
      if (d >= rho && d <= 2.0 * rho) shell += g.quadrature_weight(i) * u[i] * u[i];
    }
  }
  const bool resolved = shell_nodes >= (g.kind() == GridKind::radial ? 4u : 16u);

  EstimateReport rep;
  Check a;
  a.name = "positivity.shell_l2";
  a.inequality = "(1/rho^2) int_{B_2rho \\ B_rho} u^2 >= omega_n rho^n";
  a.tag = "positivity";
  a.params = {{"rho", rho}, {"n", static_cast<double>(n)}, {"h", g.spacing()}};
  for (std::size_t k = 0; k < c.size(); ++k) a.params.emplace_back("center" + std::to_string(k), c[k]);
  a.value = shell / (rho * rho);
  a.bound = unit_ball_volume(n) * std::pow(rho, n);
  a.relation = Relation::at_least;
  a.applicable = resolved;
  if (!resolved) a.note = "insufficient resolution: too few nodes in the shell";
  rep.checks.push_back(finish(a));

  Check b = a;
  b.name = "positivity.sup";
  b.inequality = "sup_{B_2rho} u >= rho / sqrt(2^n - 1)";
  b.value = sup;
  b.bound = rho / std::sqrt(std::pow(2.0, n) - 1.0);
  rep.checks.push_back(finish(b));
  return rep;
}

EstimateReport p_integral_check(const Field& u, double p, double eps_floor, double c_cal) {
  if (!(eps_floor > 0.0) || !(c_cal > 0.0)) throw std::invalid_argument("p_integral_check: eps and C must be positive");
  Check c;
  c.name = "p_integral";
  c.inequality = "int u^{-p} <= C |Omega| / eps^p";
  c.tag = "p-integral";
  const double vol = u.grid().volume();
  c.params = {{"p", p}, {"eps", eps_floor}, {"C", c_cal}, {"volume", vol}, {"h", u.grid().spacing()},
              {"p_threshold", p_threshold()}};
  c.value = integrate(u, -p);
  c.bound = c_cal * vol / std::pow(eps_floor, p);
  c.relation = Relation::at_most;
  c.applicable = p >= 2.0 && p < p_threshold();
  if (!c.applicable) c.note = "p outside [2, threshold): bound not claimed";
  if (!std::isfinite(c.value)) c.note += (c.note.empty() ? "" : "; ") + std::string("non-finite integral");
  EstimateReport rep;
  rep.checks.push_back(finish(c));
  return rep;
}

double calibrate_p_integral(const Field& reference, double p, double eps_floor) {
  return integrate(reference, -p) * std::pow(eps_floor, p) / reference.grid().volume();
}

namespace {
double w12_rhs_integral(const Field& phi) { return phi.grid().volume() + 2.0 * dirichlet_energy(phi); }
}  // namespace

EstimateReport w12_p2_check(const Field& u, const Field& phi, double eps_floor, double c_cal) {
  if (u.grid_ptr() != phi.grid_ptr()) throw std::invalid_argument("w12_p2_check: grid mismatch");
  if (!(eps_floor > 0.0)) throw std::invalid_argument("w12_p2_check: eps must be positive");
  Check c;
  c.name = "w12_p2";
  c.inequality = "int u^{-2} <= (C/eps^2) int (1 + |D phi|^2)";
  c.tag = "w12-data";
  const double rhs = w12_rhs_integral(phi);
  c.params = {{"eps", eps_floor}, {"C", c_cal}, {"int_1_plus_grad_phi_sq", rhs}, {"h", u.grid().spacing()}};
  c.value = integrate(u, -2.0);
  c.bound = c_cal * rhs / (eps_floor * eps_floor);
  c.relation = Relation::at_most;
  for (std::size_t i : phi.grid().boundary())
    if (phi[i] < eps_floor * (1 - 1e-12)) {
      c.applicable = false;
      c.note = "boundary data below the floor";
      break;
    }
  EstimateReport rep;
  rep.checks.push_back(finish(c));
  return rep;
}

double calibrate_w12(const Field& reference, const Field& phi, double eps_floor) {
  return integrate(reference, -2.0) * eps_floor * eps_floor / w12_rhs_integral(phi);
}

double holder_quotient(const Field& u, double alpha, const Region& region, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("holder_quotient: alpha must lie in (0, 1]");
  const Grid& g = u.grid();
  const double h = g.spacing();
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.radius(i);
    if (r >= region.r_lo * (1 - 1e-12) && r <= region.r_hi * (1 + 1e-12)) nodes.push_back(i);
  }
  const std::size_t m = nodes.size();
  if (m < 2) return 0.0;
  const bool exhaustive = m <= 20000;
  double best = 0.0;

  if (g.kind() == GridKind::radial) {
    // nodes are consecutive and equally spaced
    std::vector<double> inv(m);
    for (std::size_t k = 1; k < m; ++k) inv[k] = std::pow(k * h, -alpha);
    if (exhaustive) {
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
          best = std::max(best, std::abs(u[nodes[b]] - u[nodes[a]]) * inv[b - a]);
      return best;
    }
    for (std::size_t a = 0; a + 1 < m; ++a) best = std::max(best, std::abs(u[nodes[a + 1]] - u[nodes[a]]) * inv[1]);
    std::mt19937_64 rng(seed);
    const double lo = std::log(h), hi = std::log((m - 1) * h);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (int band = 0; band < 32; ++band) {
      std::uniform_real_distribution<double> len(lo + (hi - lo) * band / 32.0, lo + (hi - lo) * (band + 1) / 32.0);
      for (int s = 0; s < 4096; ++s) {
        const std::size_t a = pick(rng);
        const auto k = static_cast<std::size_t>(std::llround(std::exp(len(rng)) / h));
        if (k == 0) continue;
        const std::size_t b = (s % 2 == 0) ? a + k : a - k;
        if (b >= m) continue;  // also catches wrap-around
        best = std::max(best, std::abs(u[nodes[b]] - u[nodes[a]]) * inv[k]);
      }
    }
    return best;
  }

  const int n = g.axes();
  auto quotient = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = g.coords(i)[a] - g.coords(j)[a];
      s += d * d;
    }
    return std::abs(u[i] - u[j]) / std::pow(s, 0.5 * alpha);
  };
  if (exhaustive) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) best = std::max(best, quotient(nodes[a], nodes[b]));
    return best;
  }
  std::unordered_set<std::size_t> in_region(nodes.begin(), nodes.end());
  for (std::size_t i : nodes)
    for (int a = 0; a < n; ++a) {
      const long j = g.neighbor(i, a, 1);
      if (j >= 0 && in_region.count(static_cast<std::size_t>(j))) best = std::max(best, quotient(i, static_cast<std::size_t>(j)));
    }
  std::mt19937_64 rng(seed);
  double diam = 0.0;
  for (std::size_t i : nodes) diam = std::max(diam, 2.0 * g.radius(i));
  const double lo = std::log(h), hi = std::log(std::max(diam, 2.0 * h));
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::int64_t> k(static_cast<std::size_t>(n));
  for (int band = 0; band < 32; ++band) {
    std::uniform_real_distribution<double> len(lo + (hi - lo) * band / 32.0, lo + (hi - lo) * (band + 1) / 32.0);
    for (int s = 0; s < 4096; ++s) {
      const std::size_t i = nodes[pick(rng)];
      std::vector<double> dir(static_cast<std::size_t>(n));
      double norm = 0.0;
      for (auto& x : dir) {
        x = gauss(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      const double d = std::exp(len(rng));
      const auto base = g.lattice(i);
      for (int a = 0; a < n; ++a) k[a] = base[a] + std::llround(d * dir[a] / norm / h);
      const auto j = g.find_lattice(k);
      if (!j || *j == i || !in_region.count(*j)) continue;
      best = std::max(best, quotient(i, *j));
    }
  }
  return best;
}

LogTrick log_trick_functional(const Field& u, double R) {
  if (!(R > 1.0)) throw std::invalid_argument("log_trick_functional: R must exceed 1");
  const Grid& g = u.grid();
  const double R2 = R * R;
  double reach = 0.0;
  if (g.kind() == GridKind::radial || g.kind() == GridKind::ball) {
    reach = g.outer_radius();
  } else {
    const auto lo = g.lower(), hi = g.upper();
    reach = INFINITY;
    for (std::size_t a = 0; a < lo.size(); ++a) reach = std::min({reach, -lo[a], hi[a]});
  }
  if (reach < R2 * (1 - 1e-12)) throw std::invalid_argument("log_trick_functional: grid must contain B_{R^2}");
  const int n = g.dim();
  const double logR = std::log(R);
  LogTrick out;
  out.R = R;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.radius(i);
    if (r > R2) continue;
    const double w = g.quadrature_weight(i);
    const double zeta = r <= R ? 1.0 : 2.0 - std::log(r) / logR;
    if (zeta > 0.0) {
      if (!(u[i] > 0.0)) throw std::invalid_argument("log_trick_functional: field must be positive on B_{R^2}");
      out.value += w * std::pow(zeta / u[i], n);
    }
    if (r > R && r < R2) out.cutoff_energy += w * std::pow(1.0 / (r * logR), n);
  }
  return out;
}

namespace {

// Number of m in N^n (each coordinate counted twice, for both signs) with
// sum w(m_i) below the limit; strict or inclusive.
long double lattice_count(int n, double limit, bool shifted, bool strict) {
  if (limit < 0.0) return 0.0L;
  const auto top = static_cast<std::size_t>(std::floor(limit)) + 1;
  std::vector<long double> dp(top + 1, 0.0L), next;
  dp[0] = 1.0L;
  auto ok = [&](std::size_t s) { return strict ? static_cast<double>(s) < limit : static_cast<double>(s) <= limit; };
  for (int d = 0; d < n; ++d) {
    next.assign(top + 1, 0.0L);
    for (std::size_t s = 0; s <= top; ++s) {
      if (dp[s] == 0.0L) continue;
      for (std::size_t m = 0;; ++m) {
        const std::size_t w = shifted ? (m + 1) * (m + 1) : m * m;
        if (s + w > top || !ok(s + w)) break;
        next[s + w] += 2.0L * dp[s];
      }
    }
    dp.swap(next);
  }
  long double total = 0.0L;
  for (std::size_t s = 0; s <= top; ++s)
    if (ok(s)) total += dp[s];
  return total;
}

}  // namespace

std::vector<double> box_counts(const Field& u, double tau, const std::vector<double>& scales) {
  const Grid& g = u.grid();
  const double h = g.spacing();
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] >= 2.0 * h * (1 - 1e-12))) throw std::invalid_argument("box_dimension: scales must be at least 2h");
    if (k > 0 && !(scales[k] < scales[k - 1])) throw std::invalid_argument("box_dimension: scales must decrease strictly");
  }
  std::vector<std::size_t> set;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (u[i] < tau) set.push_back(i);
  std::vector<double> counts(scales.size(), 0.0);
  if (set.empty()) return counts;

  if (g.kind() == GridKind::radial) {
    double a = INFINITY, b = 0.0;
    for (std::size_t i : set) {
      a = std::min(a, g.radius(i));
      b = std::max(b, g.radius(i));
    }
    const bool ball = g.has_center() && set.front() == 0;
    a = ball ? 0.0 : std::max(a - 0.5 * h, g.has_center() ? 0.0 : g.first_radius());
    b = std::min(b + 0.5 * h, g.outer_radius());
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double d = scales[k];
      long double c = lattice_count(g.dim(), (b / d) * (b / d), false, true);
      if (a > 0.0) c -= lattice_count(g.dim(), (a / d) * (a / d), true, false);
      counts[k] = static_cast<double>(c);
    }
    return counts;
  }
  const int n = g.axes();
  for (std::size_t k = 0; k < scales.size(); ++k) {
    std::set<std::vector<std::int64_t>> boxes;
    for (std::size_t i : set) {
      std::vector<std::int64_t> key(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a) key[a] = static_cast<std::int64_t>(std::floor(g.coords(i)[a] / scales[k] + 1e-12));
      boxes.insert(std::move(key));
    }
    counts[k] = static_cast<double>(boxes.size());
  }
  return counts;
}

EstimateReport box_dimension(const Field& u, double tau, const std::vector<double>& scales) {
  if (!(tau > 0.0)) throw std::invalid_argument("box_dimension: tau must be positive");
  if (scales.size() < 2) throw std::invalid_argument("box_dimension: need at least two scales");
  const std::vector<double> counts = box_counts(u, tau, scales);
  Check c;
  c.name = "box_dimension";
  c.inequality = "box dimension of {u < tau} <= n - 4 - 2 sqrt(2) + 0.5";
  c.tag = "singular-set";
  c.params = {{"tau", tau}, {"n", static_cast<double>(u.grid().dim())}, {"h", u.grid().spacing()}};
  for (std::size_t k = 0; k < scales.size(); ++k) {
    c.params.emplace_back("delta" + std::to_string(k), scales[k]);
    c.params.emplace_back("count" + std::to_string(k), counts[k]);
  }
  c.bound = u.grid().dim() - p_threshold() + 0.5;
  c.relation = Relation::at_most;
  if (std::any_of(counts.begin(), counts.end(), [](double x) { return x <= 0.0; })) {
    c.value = -INFINITY;
    c.note = "empty sublevel set";
  } else {
    double mx = 0, my = 0;
    const auto K = static_cast<double>(scales.size());
    for (std::size_t k = 0; k < scales.size(); ++k) {
      mx += std::log(1.0 / scales[k]) / K;
      my += std::log(counts[k]) / K;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double x = std::log(1.0 / scales[k]) - mx;
      sxy += x * (std::log(counts[k]) - my);
      sxx += x * x;
    }
    c.value = sxy / sxx;
  }
  EstimateReport rep;
  rep.checks.push_back(finish(c));
  return rep;
}

}  // namespace singlab

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "singlab/grid.hpp"

namespace singlab {

/// Radial solution of u'' + (n-1)/r u' = m/u, u(0) = eps, u'(0) = 0.
struct RadialProfile {
  int dim = 0;
  double m = 1.0;
  double eps = 0.0;
  double tolerance = 0.0;
  std::string method;
  std::vector<double> r, u, du;
  std::size_t accepted = 0;
  std::size_t rejected = 0;

  /// Piecewise cubic Hermite value; exact at stored samples.
  double value_at(double radius) const;
  double end_value() const { return u.back(); }
  double end_radius() const { return r.back(); }
};

/// Three-term series at r0: returns (u(r0), u'(r0)).  Throws unless
/// m r0^2 / (2 n eps) < eps / 10.
std::pair<double, double> series_start(double eps, int n, double m, double r0);

/// Radius where the series hands over to the integrator.
double series_radius(double eps);

/// Adaptive embedded Runge-Kutta 4(5) with local error per unit step
/// below `tol`.  Every radius in `stations` becomes a stored sample.
/// Throws std::invalid_argument for eps <= 0, n < 1 or r_max <= 0 and
/// std::runtime_error on step-size underflow.
RadialProfile integrate_radial(double eps, int n, double m, double r_max, double tol = 1e-10,
                               std::span<const double> stations = {});

/// S(eps) = u_eps(1).
double shooting_map(int n, double m, double eps, double tol = 1e-10);

struct EpsWindow {
  double lo = 1e-3;
  double hi = 1e2;
  int samples = 400;
};

/// Sampled shooting map on the log-spaced window.
struct ShootingScan {
  int dim = 0;
  double m = 1.0;
  EpsWindow window;
  std::vector<double> eps, value;
};

ShootingScan scan_shooting_map(int n, double m, const EpsWindow& window = {}, double tol = 1e-10);

/// All eps in the window with S(eps) = C, ascending, each with its
/// profile on [0, 1].  Empty when C lies below the window minimum.
std::vector<RadialProfile> solve_dirichlet_radial(int n, double m, double C, const EpsWindow& window = {},
                                                  double root_tol = 1e-8, double tol = 1e-10);

struct BifurcationConstants {
  int dim = 0;
  double m = 1.0;
  EpsWindow window;
  /// Infimum of S over the window (refined).
  double c1 = 0.0;
  double eps_c1 = 0.0;
  /// Largest value of S to the left of the last interior local minimum
  /// (golden-section refined when interior); equals c1 when S is monotone.
  double c2 = 0.0;
  double eps_c2 = 0.0;
  bool monotone = false;
  bool c1_on_window_edge = false;
  bool c2_on_window_edge = false;
  std::vector<std::string> warnings;
  ShootingScan scan;
};

BifurcationConstants bifurcation_constants(int n, double m, const EpsWindow& window = {}, double tol = 1e-10);

/// sup over samples of |u(r) - r|; meaningful for m = n - 1.
double conical_deviation(const RadialProfile& profile);

/// sup over nodes with rho <= |x| <= 2 rho of |u - |x|| / rho^rate, the
/// distance to the cone of Delta u = (n-1)/u.  Throws when [rho, 2 rho]
/// is not covered by the grid.
double weighted_deviation(const Field& u, double rate, double rho);

/// Samples a profile at the radial nodes of `grid` (integrating with the
/// node radii as stations).
Field sample_profile(const GridPtr& grid, double eps, double m, double tol = 1e-10);

}  // namespace singlab

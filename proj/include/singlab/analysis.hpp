#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "singlab/grid.hpp"

namespace singlab {

enum class Relation { at_least, at_most };

struct Check {
  std::string name;
  /// Human-readable inequality being tested.
  std::string inequality;
  std::string tag;
  std::vector<std::pair<std::string, double>> params;
  double value = 0.0;
  double bound = 0.0;
  Relation relation = Relation::at_most;
  bool pass = false;
  /// False when the parameters lie outside the range where the bound is
  /// claimed, or the grid cannot resolve the check.
  bool applicable = true;
  std::string note;

  /// Pass/fail from the stored numbers.
  bool recompute() const;
  double param(const std::string& key) const;
};

struct EstimateReport {
  std::vector<Check> checks;
  bool pass() const;
  void append(const EstimateReport& other);
};

/// Larger root of a x^2 + b x + c, evaluated without cancellation.
double larger_root(double a, double b, double c);
/// p-integral threshold 2q + 2, q the larger root of q^2 - 2q - 1.
double p_threshold();
/// Larger root of n^2 - 8n + 8: the dimension where n - 1 = (n-2)^2/4.
double stability_dimension_threshold();

/// Shell integral (1/rho^2) int_{B_2rho \ B_rho} u^2 >= omega_n rho^n and
/// sup_{B_2rho} u >= rho / sqrt(2^n - 1).  Radial grids need center 0.
EstimateReport positivity_check(const Field& u, const std::vector<double>& center, double rho);

/// int u^{-p} against C_cal |Omega| / eps^p.
EstimateReport p_integral_check(const Field& u, double p, double eps_floor, double c_cal);
/// The constant that makes the reference instance sit exactly on the bound.
double calibrate_p_integral(const Field& reference, double p, double eps_floor);

/// int u^{-2} against (C/eps^2) int (1 + |D phi|^2), phi an extension of
/// the boundary data on the same grid.
EstimateReport w12_p2_check(const Field& u, const Field& phi, double eps_floor, double c_cal);
double calibrate_w12(const Field& reference, const Field& phi, double eps_floor);

/// Annulus r_lo <= |x| <= r_hi.
struct Region {
  double r_lo = 0.0;
  double r_hi = std::numeric_limits<double>::infinity();
};

/// max |u(x) - u(y)| / |x - y|^alpha over node pairs in the region.
/// Exhaustive up to 2e4 nodes; beyond that, nearest-neighbour pairs plus
/// pairs stratified by distance (32 log-spaced bands, seeded).
/// Radial fields are compared along a ray, which attains the supremum.
double holder_quotient(const Field& u, double alpha, const Region& region = {}, std::uint64_t seed = 0);

struct LogTrick {
  double R = 0.0;
  /// int (zeta/u)^n
  double value = 0.0;
  /// int |D zeta|^n, which equals |S^{n-1}| (log R)^{1-n}.
  double cutoff_energy = 0.0;
};

/// zeta = 1 on B_R, 2 - log|x|/log R on B_{R^2} \ B_R, 0 outside.
/// Requires R > 1 and a grid reaching |x| = R^2.
LogTrick log_trick_functional(const Field& u, double R);

/// Boxes of side delta from the lattice delta Z^n (a corner at the
/// origin) that meet {u < tau}, for each delta.  On radial grids the set
/// is the shell spanned by the qualifying nodes, widened by h/2, and
/// boxes are counted exactly.
std::vector<double> box_counts(const Field& u, double tau, const std::vector<double>& scales);

/// Least-squares slope of log N against log(1/delta); passes iff the
/// slope is at most n - 4 - 2 sqrt(2) + 0.5.  An empty sublevel set
/// reports -inf.
EstimateReport box_dimension(const Field& u, double tau, const std::vector<double>& scales);

}  // namespace singlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/SparseCore>

namespace singlab {

enum class GridKind { interval, box, ball, radial };

std::string to_string(GridKind kind);

struct IntervalDomain {
  double lo = 0.0;
  double hi = 1.0;
};

/// Axis-aligned box, one entry per axis.
struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Lattice points of h*Z^n inside the open ball of radius `radius`.
/// Boundary nodes are the lattice neighbours that fall outside.
struct BallDomain {
  int dim = 2;
  double radius = 1.0;
};

/// Radially symmetric functions on B_outer (inner == 0) or on the
/// annulus inner < |x| < outer in R^dim.
struct RadialDomain {
  int dim = 3;
  double inner = 0.0;
  double outer = 1.0;
};

using DomainSpec =
    std::variant<IntervalDomain, BoxDomain, BallDomain, RadialDomain>;

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// Area of the unit sphere S^{n-1}; equals 2 for n == 1.
double unit_sphere_area(int n);

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Immutable node set with its Dirichlet boundary.
///
/// Radial ball grids place nodes at R - k h, so the first node lies in
/// (0, h] and owns the cell [0, r_0 + h/2].  Interval, box and annulus
/// extents are snapped so that h divides them exactly.
class Grid {
 public:
  GridKind kind() const noexcept { return kind_; }
  /// Ambient dimension n.
  int dim() const noexcept { return dim_; }
  /// Coordinates stored per node: 1 for interval and radial grids.
  int axes() const noexcept { return axes_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return n_nodes_; }

  /// Radial grids: radius of node 0.  Zero otherwise.
  double first_radius() const noexcept { return r0_; }
  /// Radial and ball grids: outer radius.
  double outer_radius() const noexcept { return outer_; }
  /// True for radial ball grids (node 0 is an unknown next to the origin).
  bool has_center() const noexcept { return center_; }

  std::span<const double> coords(std::size_t node) const;
  /// |x|; for radial grids the node radius.
  double radius(std::size_t node) const;
  bool is_boundary(std::size_t node) const { return interior_index_[node] < 0; }
  long interior_index(std::size_t node) const { return interior_index_[node]; }
  const std::vector<std::size_t>& interior() const noexcept { return interior_; }
  const std::vector<std::size_t>& boundary() const noexcept { return boundary_; }

  /// Neighbour along `axis`, side 0 = minus, 1 = plus; -1 when absent.
  long neighbor(std::size_t node, int axis, int side) const;

  /// Trapezoid weight (radial: includes |S^{n-1}| r^{n-1} and the centre
  /// piece).
  double quadrature_weight(std::size_t node) const { return quad_[node]; }
  /// Node measure that symmetrises the discrete Laplacian.
  double mass(std::size_t node) const { return mass_[node]; }
  /// Sum of quadrature weights.
  double volume() const noexcept { return volume_; }

  /// Radial grids: r^{n-1} at the midpoint between node i and i+1.
  double face_area(std::size_t i) const;

  const DomainSpec& domain() const noexcept { return spec_; }
  std::vector<double> lower() const;
  std::vector<double> upper() const;

  /// Lattice coordinates of Cartesian nodes.
  std::span<const std::int64_t> lattice(std::size_t node) const;
  std::optional<std::size_t> find_lattice(std::span<const std::int64_t> k) const;
  std::optional<std::size_t> find_node(std::span<const double> x) const;

  /// Structured-text header: kind, n, h, r0, extents.
  std::string header() const;

  friend GridPtr build_grid(const DomainSpec& spec, double h);

 private:
  Grid() = default;
  void finish();

  GridKind kind_ = GridKind::interval;
  DomainSpec spec_;
  int dim_ = 1;
  int axes_ = 1;
  double h_ = 0.0;
  double r0_ = 0.0;
  double outer_ = 0.0;
  bool center_ = false;
  std::size_t n_nodes_ = 0;
  std::vector<double> x_;            // n_nodes * axes
  std::vector<std::int64_t> k_;      // lattice coordinates (Cartesian)
  std::vector<double> lattice_origin_; // coordinates of lattice index 0
  std::vector<long> nbr_;            // n_nodes * axes * 2
  std::vector<long> interior_index_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<double> quad_;
  std::vector<double> mass_;
  double volume_ = 0.0;
  std::int64_t key_offset_ = 0;
  std::int64_t key_base_ = 1;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
  std::uint64_t key(std::span<const std::int64_t> k) const;
};

/// Throws std::invalid_argument for h <= 0, fewer than three nodes per
/// axis, or a radial inner radius not below the outer one.
GridPtr build_grid(const DomainSpec& spec, double h);

/// Nodal values on a grid.  Solver candidates are strictly positive;
/// verifiers also accept nonnegative probes.
class Field {
 public:
  Field() = default;
  Field(GridPtr grid, std::vector<double> values);

  static Field constant(GridPtr grid, double value);
  static Field from_point(GridPtr grid,
                          const std::function<double(std::span<const double>)>& f);
  static Field from_radius(GridPtr grid, const std::function<double(double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  double min() const;
  double max() const;

  /// Values at interior nodes, in interior order.
  Eigen::VectorXd interior_values() const;
  /// Copy of `boundary` with interior values replaced.
  static Field assemble(const Field& boundary, const Eigen::VectorXd& interior);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Linear operator on interior unknowns: (L u)_I = A u_I + B u_boundary.
/// `weights` make diag(weights) * A symmetric.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseOperator(GridPtr grid, Matrix a, Matrix coupling, std::vector<double> weights);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  const Matrix& matrix() const noexcept { return a_; }
  /// Interior rows by all grid nodes; only boundary columns are populated.
  const Matrix& coupling() const noexcept { return b_; }
  const std::vector<double>& weights() const noexcept { return w_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& interior) const;
  /// Full affine action on a field, including boundary values.
  Eigen::VectorXd apply(const Field& u) const;
  /// B times the boundary values of `u`.
  Eigen::VectorXd boundary_term(const Field& u) const;

  /// Returns c*A + diag(d), coupling scaled by c.
  SparseOperator combine(double c, const Eigen::VectorXd& d) const;

  /// diag(weights) * A as a column-major symmetric matrix.
  Eigen::SparseMatrix<double> weighted() const;
  /// max |w_i a_ij - w_j a_ji| relative to max |w_i a_ij|.
  double asymmetry() const;
  bool tridiagonal() const;

 private:
  GridPtr grid_;
  Matrix a_;
  Matrix b_;
  std::vector<double> w_;
};

/// Discrete Laplacian.  Cartesian grids use the (2n+1)-point stencil;
/// radial grids use the conservative flux form
///   [A_{i+1/2}(u_{i+1}-u_i) - A_{i-1/2}(u_i-u_{i-1})] / (h V_i),
/// A = r^{n-1}, V_i = (r_{i+1/2}^n - r_{i-1/2}^n)/n, which is exact on
/// a + b r^2 and an M-matrix.
SparseOperator assemble_laplacian(const GridPtr& grid);

/// Sum of w_i u_i^p.  Returns +inf when a weighted node has u == 0 and
/// p < 0.
double integrate(const Field& u, double exponent = 1.0);
/// Sum of w_i f_i for arbitrary nodal values.
double integrate_values(const Grid& grid, std::span<const double> f);

/// (1/2) integral of |D_h u|^2 over grid edges.  Twice this equals the
/// quadratic form of -Delta_h on fields vanishing on the boundary.
double dirichlet_energy(const Field& u);

}  // namespace singlab

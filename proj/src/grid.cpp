#include "singlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "singlab/format.hpp"

namespace singlab {

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::interval: return "interval";
    case GridKind::box: return "box";
    case GridKind::ball: return "ball";
    case GridKind::radial: return "radial";
  }
  return "unknown";
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

namespace {

// a^n - b^n without cancellation for a close to b.
double power_difference(double a, double b, int n) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::pow(a, k) * std::pow(b, n - 1 - k);
  return (a - b) * sum;
}

long snap_count(double length, double h, const char* what) {
  if (!(length > 0.0)) throw std::invalid_argument(std::string(what) + ": empty extent");
  const double q = length / h;
  if (!std::isfinite(q) || q > 1e8) throw std::invalid_argument(std::string(what) + ": too many nodes");
  const long cells = std::lround(q);
  if (cells < 2) throw std::invalid_argument(std::string(what) + ": fewer than 3 nodes per axis");
  return cells;
}

}  // namespace

std::span<const double> Grid::coords(std::size_t node) const {
  return {x_.data() + node * axes_, static_cast<std::size_t>(axes_)};
}

double Grid::radius(std::size_t node) const {
  if (kind_ == GridKind::radial) return x_[node];
  double s = 0.0;
  for (int a = 0; a < axes_; ++a) s += x_[node * axes_ + a] * x_[node * axes_ + a];
  return std::sqrt(s);
}

long Grid::neighbor(std::size_t node, int axis, int side) const {
  return nbr_[(node * axes_ + axis) * 2 + side];
}

double Grid::face_area(std::size_t i) const {
  const double r = 0.5 * (x_[i] + x_[i + 1]);
  return std::pow(r, dim_ - 1);
}

std::vector<double> Grid::lower() const {
  switch (kind_) {
    case GridKind::interval: return {std::get<IntervalDomain>(spec_).lo};
    case GridKind::box: return std::get<BoxDomain>(spec_).lo;
    case GridKind::ball: return std::vector<double>(dim_, -outer_);
    case GridKind::radial: return {center_ ? 0.0 : r0_};
  }
  return {};
}

std::vector<double> Grid::upper() const {
  switch (kind_) {
    case GridKind::interval: return {std::get<IntervalDomain>(spec_).hi};
    case GridKind::box: return std::get<BoxDomain>(spec_).hi;
    case GridKind::ball: return std::vector<double>(dim_, outer_);
    case GridKind::radial: return {outer_};
  }
  return {};
}

std::span<const std::int64_t> Grid::lattice(std::size_t node) const {
  if (k_.empty()) throw std::logic_error("lattice: radial grid has no lattice");
  return {k_.data() + node * axes_, static_cast<std::size_t>(axes_)};
}

std::uint64_t Grid::key(std::span<const std::int64_t> k) const {
  std::uint64_t out = 0;
  for (int a = axes_ - 1; a >= 0; --a)
    out = out * static_cast<std::uint64_t>(key_base_) + static_cast<std::uint64_t>(k[a] + key_offset_);
  return out;
}

std::optional<std::size_t> Grid::find_lattice(std::span<const std::int64_t> k) const {
  if (k_.empty()) return std::nullopt;
  for (int a = 0; a < axes_; ++a)
    if (k[a] + key_offset_ < 0 || k[a] + key_offset_ >= key_base_) return std::nullopt;
  auto it = lookup_.find(key(k));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Grid::find_node(std::span<const double> x) const {
  const double tol = 1e-9 * h_;
  if (kind_ == GridKind::radial) {
    const double q = (x[0] - r0_) / h_;
    const long i = std::lround(q);
    if (i < 0 || i >= static_cast<long>(n_nodes_)) return std::nullopt;
    if (std::abs(x_[i] - x[0]) > tol) return std::nullopt;
    return static_cast<std::size_t>(i);
  }
  std::vector<std::int64_t> k(axes_);
  for (int a = 0; a < axes_; ++a) {
    const double q = (x[a] - lattice_origin_[a]) / h_;
    k[a] = std::llround(q);
    if (std::abs(q - static_cast<double>(k[a])) * h_ > tol) return std::nullopt;
  }
  return find_lattice(k);
}

std::string Grid::header() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind_) << '\n';
  os << "n=" << dim_ << '\n';
  os << "h=" << format_number(h_) << '\n';
  os << "r0=" << format_number(kind_ == GridKind::radial ? r0_ : 0.0) << '\n';
  const auto lo = lower();
  const auto hi = upper();
  os << "extents=";
  for (std::size_t a = 0; a < lo.size(); ++a)
    os << (a ? "," : "") << format_number(lo[a]) << ':' << format_number(hi[a]);
  os << '\n';
  os << "nodes=" << n_nodes_ << '\n';
  os << "interior=" << interior_.size() << '\n';
  return os.str();
}

void Grid::finish() {
  interior_.clear();
  boundary_.clear();
  for (std::size_t i = 0; i < n_nodes_; ++i) {
    if (interior_index_[i] >= 0) {
      interior_index_[i] = static_cast<long>(interior_.size());
      interior_.push_back(i);
    } else {
      boundary_.push_back(i);
    }
  }
  volume_ = 0.0;
  for (double w : quad_) volume_ += w;
}

GridPtr build_grid(const DomainSpec& spec, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("build_grid: spacing must be positive");
  std::shared_ptr<Grid> g(new Grid());
  g->spec_ = spec;

  if (const auto* d = std::get_if<IntervalDomain>(&spec)) {
    BoxDomain box{{d->lo}, {d->hi}};
    auto b = build_grid(box, h);
    auto out = std::shared_ptr<Grid>(new Grid(*b));
    out->kind_ = GridKind::interval;
    out->spec_ = spec;
    return out;
  }

  if (const auto* d = std::get_if<BoxDomain>(&spec)) {
    const int n = static_cast<int>(d->lo.size());
    if (n < 1 || d->hi.size() != d->lo.size()) throw std::invalid_argument("build_grid: malformed box");
    std::vector<long> cells(n);
    for (int a = 0; a < n; ++a) cells[a] = snap_count(d->hi[a] - d->lo[a], h, "build_grid");
    const double he = (d->hi[0] - d->lo[0]) / cells[0];
    for (int a = 1; a < n; ++a)
      if (std::abs(cells[a] * he - (d->hi[a] - d->lo[a])) > 1e-9 * (d->hi[a] - d->lo[a]))
        throw std::invalid_argument("build_grid: box extents incommensurate with spacing");
    g->kind_ = GridKind::box;
    g->dim_ = g->axes_ = n;
    g->h_ = he;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(cells[a] + 1);
    g->n_nodes_ = total;
    g->x_.resize(total * n);
    g->k_.resize(total * n);
    g->nbr_.assign(total * n * 2, -1);
    g->interior_index_.assign(total, 0);
    g->quad_.assign(total, 0.0);
    g->mass_.assign(total, 0.0);
    g->lattice_origin_ = d->lo;
    g->key_offset_ = 0;
    g->key_base_ = *std::max_element(cells.begin(), cells.end()) + 1;
    std::vector<std::size_t> stride(n, 1);
    for (int a = 1; a < n; ++a) stride[a] = stride[a - 1] * static_cast<std::size_t>(cells[a - 1] + 1);
    const double cell_volume = std::pow(he, n);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t rem = i;
      double w = cell_volume;
      bool inner = true;
      for (int a = 0; a < n; ++a) {
        const long k = static_cast<long>(rem % static_cast<std::size_t>(cells[a] + 1));
        rem /= static_cast<std::size_t>(cells[a] + 1);
        g->k_[i * n + a] = k;
        g->x_[i * n + a] = (k == cells[a]) ? d->hi[a] : d->lo[a] + k * he;
        if (k == 0 || k == cells[a]) {
          w *= 0.5;
          inner = false;
        }
        if (k > 0) g->nbr_[(i * n + a) * 2 + 0] = static_cast<long>(i - stride[a]);
        if (k < cells[a]) g->nbr_[(i * n + a) * 2 + 1] = static_cast<long>(i + stride[a]);
      }
      g->quad_[i] = w;
      g->interior_index_[i] = inner ? 0 : -1;
      g->mass_[i] = inner ? cell_volume : 0.0;
      g->lookup_.emplace(g->key(g->lattice(i)), i);
    }
    g->finish();
    return g;
  }

  if (const auto* d = std::get_if<BallDomain>(&spec)) {
    const int n = d->dim;
    if (n < 1 || n > 6) throw std::invalid_argument("build_grid: ball dimension must be in [1, 6]");
    if (!(d->radius > h)) throw std::invalid_argument("build_grid: fewer than 3 nodes per axis");
    g->kind_ = GridKind::ball;
    g->dim_ = g->axes_ = n;
    g->h_ = h;
    g->outer_ = d->radius;
    const std::int64_t K = static_cast<std::int64_t>(std::ceil(d->radius / h)) + 1;
    g->key_offset_ = K;
    g->key_base_ = 2 * K + 1;
    g->lattice_origin_.assign(n, 0.0);
    const double r2 = d->radius * d->radius * (1.0 - 1e-12);
    // interior nodes first, lexicographic
    std::vector<std::int64_t> k(n, -K);
    std::vector<std::int64_t> pts;
    auto inside = [&](const std::vector<std::int64_t>& kk) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += (kk[a] * h) * (kk[a] * h);
      return s < r2;
    };
    for (;;) {
      if (inside(k)) pts.insert(pts.end(), k.begin(), k.end());
      int a = 0;
      while (a < n && ++k[a] > K) { k[a] = -K; ++a; }
      if (a == n) break;
    }
    const std::size_t n_in = pts.size() / n;
    std::unordered_map<std::uint64_t, std::size_t>& lut = g->lookup_;
    auto add = [&](std::span<const std::int64_t> kk) {
      const std::size_t id = g->k_.size() / n;
      g->k_.insert(g->k_.end(), kk.begin(), kk.end());
      lut.emplace(g->key(kk), id);
      return id;
    };
    for (std::size_t i = 0; i < n_in; ++i) add({pts.data() + i * n, static_cast<std::size_t>(n)});
    for (std::size_t i = 0; i < n_in; ++i) {
      for (int a = 0; a < n; ++a) {
        for (int s : {-1, 1}) {
          std::vector<std::int64_t> q(pts.begin() + i * n, pts.begin() + (i + 1) * n);
          q[a] += s;
          if (lut.find(g->key(q)) == lut.end()) add(q);
        }
      }
    }
    g->n_nodes_ = g->k_.size() / n;
    g->x_.resize(g->n_nodes_ * n);
    for (std::size_t i = 0; i < g->x_.size(); ++i) g->x_[i] = g->k_[i] * h;
    g->nbr_.assign(g->n_nodes_ * n * 2, -1);
    for (std::size_t i = 0; i < g->n_nodes_; ++i) {
      for (int a = 0; a < n; ++a) {
        for (int side = 0; side < 2; ++side) {
          std::vector<std::int64_t> q(g->k_.begin() + i * n, g->k_.begin() + (i + 1) * n);
          q[a] += side ? 1 : -1;
          if (q[a] + K < 0 || q[a] + K >= 2 * K + 1) continue;
          auto it = lut.find(g->key(q));
          if (it != lut.end()) g->nbr_[(i * n + a) * 2 + side] = static_cast<long>(it->second);
        }
      }
    }
    const double cell_volume = std::pow(h, n);
    g->interior_index_.assign(g->n_nodes_, -1);
    g->quad_.assign(g->n_nodes_, 0.0);
    g->mass_.assign(g->n_nodes_, 0.0);
    for (std::size_t i = 0; i < n_in; ++i) {
      g->interior_index_[i] = 0;
      g->quad_[i] = g->mass_[i] = cell_volume;
    }
    g->finish();
    return g;
  }

  const auto& d = std::get<RadialDomain>(spec);
  const int n = d.dim;
  if (n < 1) throw std::invalid_argument("build_grid: radial dimension must be positive");
  if (!(d.inner >= 0.0) || !(d.outer > d.inner))
    throw std::invalid_argument("build_grid: radial inner radius must be below the outer radius");
  g->kind_ = GridKind::radial;
  g->dim_ = n;
  g->axes_ = 1;
  g->outer_ = d.outer;
  std::size_t N;
  if (d.inner == 0.0) {
    const double q = d.outer / h;
    if (q > 1e8) throw std::invalid_argument("build_grid: too many nodes");
    N = static_cast<std::size_t>(std::ceil(q - 1e-9));
    if (N < 3) throw std::invalid_argument("build_grid: fewer than 3 nodes per axis");
    g->h_ = h;
    g->center_ = true;
    g->x_.resize(N);
    for (std::size_t i = 0; i < N; ++i) g->x_[i] = d.outer - static_cast<double>(N - 1 - i) * h;
  } else {
    const long cells = snap_count(d.outer - d.inner, h, "build_grid");
    N = static_cast<std::size_t>(cells + 1);
    g->h_ = (d.outer - d.inner) / cells;
    g->x_.resize(N);
    for (std::size_t i = 0; i < N; ++i) g->x_[i] = d.inner + static_cast<double>(i) * g->h_;
    g->x_.back() = d.outer;
  }
  g->r0_ = g->x_[0];
  g->n_nodes_ = N;
  g->nbr_.assign(N * 2, -1);
  for (std::size_t i = 0; i < N; ++i) {
    if (i > 0) g->nbr_[i * 2] = static_cast<long>(i - 1);
    if (i + 1 < N) g->nbr_[i * 2 + 1] = static_cast<long>(i + 1);
  }
  g->interior_index_.assign(N, 0);
  g->interior_index_[N - 1] = -1;
  if (!g->center_) g->interior_index_[0] = -1;

  const double S = unit_sphere_area(n);
  const double he = g->h_;
  g->quad_.assign(N, 0.0);
  g->mass_.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = g->x_[i];
    double w = S * he * std::pow(r, n - 1);
    if (i == 0 || i + 1 == N) w *= 0.5;
    g->quad_[i] = w;
    if (g->interior_index_[i] >= 0) {
      const double lo = (i == 0) ? 0.0 : 0.5 * (g->x_[i - 1] + r);
      const double hi = 0.5 * (r + g->x_[i + 1]);
      g->mass_[i] = S * power_difference(hi, lo, n) / n;
    }
  }
  if (g->center_) g->quad_[0] += S * std::pow(g->r0_, n) / n;
  g->finish();
  return g;
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("Field: null grid");
  if (values_.size() != grid_->size()) throw std::invalid_argument("Field: size does not match grid");
}

Field Field::constant(GridPtr grid, double value) {
  const std::size_t n = grid->size();
  return Field(std::move(grid), std::vector<double>(n, value));
}

Field Field::from_point(GridPtr grid, const std::function<double(std::span<const double>)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->coords(i));
  return Field(std::move(grid), std::move(v));
}

Field Field::from_radius(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->radius(i));
  return Field(std::move(grid), std::move(v));
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

Eigen::VectorXd Field::interior_values() const {
  const auto& in = grid_->interior();
  Eigen::VectorXd v(static_cast<Eigen::Index>(in.size()));
  for (std::size_t i = 0; i < in.size(); ++i) v[static_cast<Eigen::Index>(i)] = values_[in[i]];
  return v;
}

Field Field::assemble(const Field& boundary, const Eigen::VectorXd& interior) {
  Field out = boundary;
  const auto& in = out.grid().interior();
  if (static_cast<std::size_t>(interior.size()) != in.size())
    throw std::invalid_argument("Field::assemble: interior size mismatch");
  for (std::size_t i = 0; i < in.size(); ++i) out.values_[in[i]] = interior[static_cast<Eigen::Index>(i)];
  return out;
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(GridPtr grid, Matrix a, Matrix coupling, std::vector<double> weights)
    : grid_(std::move(grid)), a_(std::move(a)), b_(std::move(coupling)), w_(std::move(weights)) {
  if (a_.rows() != a_.cols() || static_cast<std::size_t>(a_.rows()) != w_.size())
    throw std::invalid_argument("SparseOperator: inconsistent sizes");
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& interior) const { return a_ * interior; }

Eigen::VectorXd SparseOperator::boundary_term(const Field& u) const {
  Eigen::Map<const Eigen::VectorXd> all(u.values().data(), static_cast<Eigen::Index>(u.size()));
  return b_ * all;
}

Eigen::VectorXd SparseOperator::apply(const Field& u) const {
  return a_ * u.interior_values() + boundary_term(u);
}

SparseOperator SparseOperator::combine(double c, const Eigen::VectorXd& d) const {
  Matrix a = c * a_;
  Matrix b = c * b_;
  if (d.size() != a.rows()) throw std::invalid_argument("SparseOperator::combine: diagonal size mismatch");
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) += d[i];
  a.makeCompressed();
  return SparseOperator(grid_, std::move(a), std::move(b), w_);
}

Eigen::SparseMatrix<double> SparseOperator::weighted() const {
  Eigen::SparseMatrix<double> k(a_.rows(), a_.cols());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(a_.nonZeros()));
  for (Eigen::Index i = 0; i < a_.outerSize(); ++i)
    for (Matrix::InnerIterator it(a_, i); it; ++it) t.emplace_back(i, it.col(), w_[i] * it.value());
  k.setFromTriplets(t.begin(), t.end());
  // average with the transpose to remove rounding asymmetry
  Eigen::SparseMatrix<double> kt = k.transpose();
  return 0.5 * (k + kt);
}

double SparseOperator::asymmetry() const {
  Eigen::SparseMatrix<double> k(a_.rows(), a_.cols());
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < a_.outerSize(); ++i)
    for (Matrix::InnerIterator it(a_, i); it; ++it) t.emplace_back(i, it.col(), w_[i] * it.value());
  k.setFromTriplets(t.begin(), t.end());
  Eigen::SparseMatrix<double> kt = k.transpose();
  Eigen::SparseMatrix<double> diff = k - kt;
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < diff.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, j); it; ++it) num = std::max(num, std::abs(it.value()));
  for (Eigen::Index j = 0; j < k.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, j); it; ++it) den = std::max(den, std::abs(it.value()));
  return den > 0.0 ? num / den : 0.0;
}

bool SparseOperator::tridiagonal() const {
  for (Eigen::Index i = 0; i < a_.outerSize(); ++i)
    for (Matrix::InnerIterator it(a_, i); it; ++it)
      if (std::abs(it.col() - i) > 1) return false;
  return true;
}

SparseOperator assemble_laplacian(const GridPtr& grid) {
  const Grid& g = *grid;
  const auto& in = g.interior();
  const auto m = static_cast<Eigen::Index>(in.size());
  std::vector<Eigen::Triplet<double>> ta, tb;
  std::vector<double> w(in.size());
  const double h = g.spacing();

  auto put = [&](Eigen::Index row, std::size_t node, double value) {
    const long j = g.interior_index(node);
    if (j >= 0)
      ta.emplace_back(row, j, value);
    else
      tb.emplace_back(row, static_cast<Eigen::Index>(node), value);
  };

  if (g.kind() == GridKind::radial) {
    const int n = g.dim();
    for (Eigen::Index row = 0; row < m; ++row) {
      const std::size_t i = in[static_cast<std::size_t>(row)];
      const double V = g.mass(i) / unit_sphere_area(n);
      const double right = g.face_area(i) / (h * V);
      double diag = -right;
      put(row, i + 1, right);
      if (i > 0) {
        const double left = g.face_area(i - 1) / (h * V);
        diag -= left;
        put(row, i - 1, left);
      }
      ta.emplace_back(row, row, diag);
      w[static_cast<std::size_t>(row)] = g.mass(i);
    }
  } else {
    const double c = 1.0 / (h * h);
    for (Eigen::Index row = 0; row < m; ++row) {
      const std::size_t i = in[static_cast<std::size_t>(row)];
      for (int a = 0; a < g.axes(); ++a)
        for (int side = 0; side < 2; ++side) {
          const long j = g.neighbor(i, a, side);
          if (j < 0) throw std::logic_error("assemble_laplacian: interior node missing a neighbour");
          put(row, static_cast<std::size_t>(j), c);
        }
      ta.emplace_back(row, row, -2.0 * g.axes() * c);
      w[static_cast<std::size_t>(row)] = g.mass(i);
    }
  }
  SparseOperator::Matrix a(m, m), b(m, static_cast<Eigen::Index>(g.size()));
  a.setFromTriplets(ta.begin(), ta.end());
  b.setFromTriplets(tb.begin(), tb.end());
  a.makeCompressed();
  b.makeCompressed();
  return SparseOperator(grid, std::move(a), std::move(b), std::move(w));
}

double integrate_values(const Grid& grid, std::span<const double> f) {
  if (f.size() != grid.size()) throw std::invalid_argument("integrate_values: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = grid.quadrature_weight(i);
    if (w != 0.0) s += w * f[i];
  }
  return s;
}

double integrate(const Field& u, double exponent) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = g.quadrature_weight(i);
    if (w == 0.0) continue;
    if (exponent < 0.0 && u[i] <= 0.0) return std::numeric_limits<double>::infinity();
    s += w * (exponent == 1.0 ? u[i] : std::pow(u[i], exponent));
  }
  return s;
}

double dirichlet_energy(const Field& u) {
  const Grid& g = u.grid();
  const double h = g.spacing();
  double e = 0.0;
  if (g.kind() == GridKind::radial) {
    const double S = unit_sphere_area(g.dim());
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      const double d = u[i + 1] - u[i];
      e += g.face_area(i) * d * d / h;
    }
    return 0.5 * S * e;
  }
  const int n = g.axes();
  const double cell = std::pow(h, g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int a = 0; a < n; ++a) {
      const long j = g.neighbor(i, a, 1);
      if (j < 0) continue;
      double w = cell;
      if (g.kind() == GridKind::ball) {
        if (g.is_boundary(i) && g.is_boundary(static_cast<std::size_t>(j))) continue;
      } else {
        // edges lying on a face carry the trapezoid face factor
        for (int b = 0; b < n; ++b)
          if (b != a && (g.neighbor(i, b, 0) < 0 || g.neighbor(i, b, 1) < 0)) w *= 0.5;
      }
      const double d = (u[static_cast<std::size_t>(j)] - u[i]) / h;
      e += w * d * d;
    }
  }
  return 0.5 * e;
}

}  // namespace singlab

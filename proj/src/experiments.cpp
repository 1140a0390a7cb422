#include "singlab/experiments.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "singlab/analysis.hpp"

namespace singlab {

Field cone_field(const GridPtr& grid, double m) {
  const int n = grid->dim();
  if (n < 2) throw std::invalid_argument("cone_field: needs n >= 2");
  const double c = std::sqrt(m / (n - 1.0));
  return Field::from_radius(grid, [c](double r) { return c * r; });
}

const SolveReport& reference_instance() {
  static std::once_flag once;
  static SolveReport ref;
  std::call_once(once, [] {
    const GridPtr g = build_grid(RadialDomain{3, 0.0, 1.0}, 1.0 / 128);
    MaximalOptions o;
    o.method = MaximalMethod::monotone_newton;
    ref = maximal_solution(Field::constant(g, 2.0), o);
    if (!ref.converged()) throw std::runtime_error("reference instance did not converge");
  });
  return ref;
}

double p_integral_constant(double p) { return 10.0 * calibrate_p_integral(reference_instance().solution, p, 2.0); }

double w12_constant() {
  const Field& u = reference_instance().solution;
  return 10.0 * calibrate_w12(u, Field::constant(u.grid_ptr(), 2.0), 2.0);
}

}  // namespace singlab

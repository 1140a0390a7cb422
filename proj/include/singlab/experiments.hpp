#pragma once

#include "singlab/grid.hpp"
#include "singlab/solver.hpp"

namespace singlab {

/// sqrt(m/(n-1)) |x|, the conical solution of Delta u = m/u.
Field cone_field(const GridPtr& grid, double m = 1.0);

/// Maximal solution of Delta u = 1/u on the radial unit ball in R^3 with
/// u = 2 on the boundary, h = 1/128.  Computed once per process.
const SolveReport& reference_instance();

/// Calibrated constants on the reference instance (eps = 2), already
/// multiplied by the safety factor 10.
double p_integral_constant(double p);
double w12_constant();

}  // namespace singlab

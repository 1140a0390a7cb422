#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singlab/solver.hpp"

namespace singlab {

enum class TraceStatus {
  completed,
  nonexistence_detected,
  fold_detected,  // completed, but lambda_min changed sign along the way
  stalled,        // terminal failure without nonexistence evidence
  max_steps
};

std::string to_string(TraceStatus s);

struct TraceStep {
  double t = 0.0;
  /// Mean of the boundary data at t.
  double boundary_level = 0.0;
  double min_u = 0.0;
  double lambda_min = NAN;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string status;
};

/// Accepted steps in increasing t, followed by one failed record when
/// the run ends early.
struct ContinuationTrace {
  std::vector<TraceStep> steps;
  std::vector<Field> solutions;  // one per converged step when kept
  TraceStatus status = TraceStatus::completed;
  double failure_t = NAN;
  std::size_t attempts = 0;
  std::size_t restarts = 0;
  std::vector<std::string> notes;
};

struct HomotopyOptions {
  std::size_t steps = 20;
  double min_dt = 1e-4;
  int restarts = 3;
  bool track_stability = true;
  bool keep_solutions = true;
  std::size_t max_attempts = 10000;
  MaximalOptions solver = [] {
    MaximalOptions o;
    o.method = MaximalMethod::monotone_newton;
    return o;
  }();
};

/// Tracks the maximal solution for data (1-t) phi0 + t phi1, t: 0 -> 1.
/// Requires phi0 >= phi1 > 0 on the boundary, so that
/// u_prev - H[phi_prev - phi_next] is a supersolution for the next data.
/// Failed steps are bisected down to min_dt, then retried from up to three
/// other supersolutions before the run ends.  Identical endpoints give a
/// single record at t = 1.
ContinuationTrace homotopy_run(const Field& phi0, const Field& phi1, const HomotopyOptions& options = {});

struct FoldInterval {
  double t_lo = 0.0, t_hi = 0.0;
  double level_lo = 0.0, level_hi = 0.0;
  std::string reason;
};

/// Intervals where lambda_min changes sign, plus the last interval of a
/// run that ends in nonexistence while lambda_min decays toward zero.
std::vector<FoldInterval> fold_detect(const ContinuationTrace& trace);

struct SequenceEntry {
  double target = 0.0;
  bool achieved = false;
  double min_u = NAN;
  double t = NAN;
  double boundary_level = NAN;
  /// sup |u - sqrt(m/(n-1)) |x||
  double cone_distance = NAN;
  std::optional<Field> solution;
  std::string obstruction;
};

struct SequenceOptions {
  HomotopyOptions homotopy;
  /// Accepted window for min u is [accept_low * target, target].
  double accept_low = 0.9;
  std::size_t max_bisections = 80;
};

/// Maximal solutions along the homotopy whose minimum reaches each target.
/// Unreachable targets are reported with the obstruction.  Throws unless
/// targets are positive and strictly decreasing.
std::vector<SequenceEntry> singular_sequence(const Field& phi0, const Field& phi1, std::span<const double> targets,
                                             const SequenceOptions& options = {});

/// sup over nodes of |u - sqrt(m/(n-1)) |x||.
double cone_distance(const Field& u, double m = 1.0);

}  // namespace singlab

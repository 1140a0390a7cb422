#include "singlab/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "singlab/stability.hpp"

namespace singlab {

std::string to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::completed: return "completed";
    case TraceStatus::nonexistence_detected: return "nonexistence-detected";
    case TraceStatus::fold_detected: return "fold-detected";
    case TraceStatus::stalled: return "stalled";
    case TraceStatus::max_steps: return "max-steps";
  }
  return "unknown";
}

namespace {

class Path {
 public:
  Path(const Field& phi0, const Field& phi1) : phi0_(phi0), phi1_(phi1), lap_(assemble_laplacian(phi0.grid_ptr())) {
    if (phi0.grid_ptr() != phi1.grid_ptr()) throw std::invalid_argument("homotopy: endpoints on different grids");
    Field diff = phi0;
    for (std::size_t i : phi0.grid().boundary()) {
      if (!(phi1[i] > 0.0)) throw std::invalid_argument("homotopy: end data must be positive");
      if (phi0[i] < phi1[i]) throw std::invalid_argument("homotopy: data must decrease along the path");
      diff[i] = phi0[i] - phi1[i];
    }
    dh_ = harmonic_extension(diff, lap_);
  }

  Field data(double t) const {
    Field d = phi0_;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (1.0 - t) * phi0_[i] + t * phi1_[i];
    return d;
  }

  double level(double t) const {
    double s = 0.0;
    const auto& b = phi0_.grid().boundary();
    for (std::size_t i : b) s += (1.0 - t) * phi0_[i] + t * phi1_[i];
    return s / static_cast<double>(b.size());
  }

  // u_prev - c (t' - t) H[phi0 - phi1]: a supersolution for the data at t'.
  std::optional<Field> lowered(const Field& u, double dt, double c) const {
    Field w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] - c * dt * dh_[i];
    for (std::size_t i : w.grid().interior())
      if (!(w[i] > 0.0)) return std::nullopt;
    return w;
  }

  SolveReport solve(double t, std::optional<Field> start, const MaximalOptions& base) const {
    MaximalOptions o = base;
    o.start = std::move(start);
    return maximal_solution(data(t), o);
  }

 private:
  Field phi0_, phi1_;
  SparseOperator lap_;
  Field dh_;
};

double lambda_of(const Field& u, const Nonlinearity& f) {
  return smallest_eigenvalue(stability_operator(u, f)).lambda_min;
}

}  // namespace

ContinuationTrace homotopy_run(const Field& phi0, const Field& phi1, const HomotopyOptions& opt) {
  if (opt.steps == 0) throw std::invalid_argument("homotopy_run: steps must be positive");
  if (!(opt.min_dt > 0.0)) throw std::invalid_argument("homotopy_run: min_dt must be positive");
  const Path path(phi0, phi1);
  ContinuationTrace trace;

  auto record = [&](double t, const SolveReport& r) {
    TraceStep s;
    s.t = t;
    s.boundary_level = path.level(t);
    s.min_u = r.min_u;
    s.iterations = r.iterations;
    s.residual = r.residual;
    s.converged = r.converged();
    s.status = to_string(r.status);
    if (s.converged && opt.track_stability) s.lambda_min = lambda_of(r.solution, opt.solver.f);
    trace.steps.push_back(s);
    if (s.converged && opt.keep_solutions) trace.solutions.push_back(r.solution);
  };

  ++trace.attempts;
  SolveReport first = path.solve(0.0, std::nullopt, opt.solver);
  record(0.0, first);
  if (!first.converged()) {
    trace.failure_t = 0.0;
    trace.status = first.nonexistence() ? TraceStatus::nonexistence_detected : TraceStatus::stalled;
    trace.notes.push_back("no solution for the initial data");
    return trace;
  }

  if (phi0.values() == phi1.values()) {
    trace.steps.back().t = 1.0;
    trace.notes.push_back("identical endpoints; single step");
    return trace;
  }

  Field u = first.solution;
  double t = 0.0;
  const double dt0 = 1.0 / static_cast<double>(opt.steps);
  double dt = dt0;
  while (t < 1.0) {
    if (trace.attempts >= opt.max_attempts) {
      trace.status = TraceStatus::max_steps;
      return trace;
    }
    const double t_next = std::min(1.0, t + dt);
    const double step = t_next - t;
    ++trace.attempts;
    SolveReport r = path.solve(t_next, path.lowered(u, step, 1.0), opt.solver);
    bool evidence = r.nonexistence();
    if (!r.converged() && dt / 2.0 < opt.min_dt) {
      // last resort: other supersolutions above the maximal solution
      std::vector<std::optional<Field>> starts{std::nullopt, path.lowered(u, step, 0.5), u};
      for (int k = 0; k < opt.restarts && k < static_cast<int>(starts.size()) && !r.converged(); ++k) {
        ++trace.attempts;
        ++trace.restarts;
        r = path.solve(t_next, starts[static_cast<std::size_t>(k)], opt.solver);
        evidence = evidence || r.nonexistence();
      }
      if (!r.converged()) {
        record(t_next, r);
        trace.failure_t = t_next;
        trace.status = evidence ? TraceStatus::nonexistence_detected : TraceStatus::stalled;
        return trace;
      }
    }
    if (!r.converged()) {
      dt /= 2.0;
      continue;
    }
    record(t_next, r);
    u = r.solution;
    t = t_next;
    dt = std::min(dt0, 2.0 * dt);
  }

  bool sign_change = false;
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    const double a = trace.steps[k - 1].lambda_min, b = trace.steps[k].lambda_min;
    if (std::isfinite(a) && std::isfinite(b) && (a < 0.0) != (b < 0.0)) sign_change = true;
  }
  trace.status = sign_change ? TraceStatus::fold_detected : TraceStatus::completed;
  return trace;
}

std::vector<FoldInterval> fold_detect(const ContinuationTrace& trace) {
  std::vector<FoldInterval> out;
  std::vector<const TraceStep*> ok;
  for (const auto& s : trace.steps)
    if (s.converged) ok.push_back(&s);
  for (std::size_t k = 1; k < ok.size(); ++k) {
    const double a = ok[k - 1]->lambda_min, b = ok[k]->lambda_min;
    if (std::isfinite(a) && std::isfinite(b) && (a < 0.0) != (b < 0.0))
      out.push_back({ok[k - 1]->t, ok[k]->t, ok[k - 1]->boundary_level, ok[k]->boundary_level, "lambda_min changes sign"});
  }
  if (trace.status == TraceStatus::nonexistence_detected && !ok.empty() && std::isfinite(trace.failure_t)) {
    const TraceStep& last = *ok.back();
    double peak = 0.0;
    for (const auto* s : ok)
      if (std::isfinite(s->lambda_min)) peak = std::max(peak, s->lambda_min);
    const bool decaying = std::isfinite(last.lambda_min) && last.lambda_min >= 0.0 && last.lambda_min < 0.1 * peak;
    const TraceStep& fail = trace.steps.back();
    if (decaying)
      out.push_back({last.t, trace.failure_t, last.boundary_level, fail.boundary_level,
                     "lambda_min decays to zero before nonexistence"});
  }
  return out;
}

double cone_distance(const Field& u, double m) {
  const int n = u.grid().dim();
  if (n < 2) throw std::invalid_argument("cone_distance: needs n >= 2");
  const double c = std::sqrt(m / (n - 1.0));
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - c * u.grid().radius(i)));
  return d;
}

std::vector<SequenceEntry> singular_sequence(const Field& phi0, const Field& phi1, std::span<const double> targets,
                                             const SequenceOptions& opt) {
  for (double tau : targets)
    if (!(tau > 0.0)) throw std::invalid_argument("singular_sequence: targets must be positive");
  for (std::size_t k = 1; k < targets.size(); ++k)
    if (!(targets[k] < targets[k - 1])) throw std::invalid_argument("singular_sequence: targets must decrease");
  HomotopyOptions hopt = opt.homotopy;
  hopt.keep_solutions = true;
  const ContinuationTrace trace = homotopy_run(phi0, phi1, hopt);
  const Path path(phi0, phi1);

  std::vector<std::pair<double, const Field*>> branch;  // converged (t, solution)
  {
    std::size_t j = 0;
    for (const auto& s : trace.steps)
      if (s.converged) branch.emplace_back(s.t, &trace.solutions[j++]);
  }
  auto min_of = [](const Field& u) {
    double m = INFINITY;
    for (std::size_t i : u.grid().interior()) m = std::min(m, u[i]);
    return m;
  };

  std::vector<SequenceEntry> out;
  for (double tau : targets) {
    SequenceEntry e;
    e.target = tau;
    auto accept = [&](double t, const Field& u) {
      e.achieved = true;
      e.t = t;
      e.min_u = min_of(u);
      e.boundary_level = path.level(t);
      e.cone_distance = cone_distance(u, opt.homotopy.solver.f.m);
      e.solution = u;
    };
    if (branch.empty()) {
      e.obstruction = "no solution for the initial data";
      out.push_back(std::move(e));
      continue;
    }
    std::size_t k = 0;
    while (k < branch.size() && min_of(*branch[k].second) > tau) ++k;
    if (k < branch.size() && min_of(*branch[k].second) >= opt.accept_low * tau) {
      accept(branch[k].first, *branch[k].second);
      out.push_back(std::move(e));
      continue;
    }
    if (k == 0) {
      e.obstruction = "initial solution already lies below the target window";
      out.push_back(std::move(e));
      continue;
    }
    double ta = branch[k - 1].first;
    Field ua = *branch[k - 1].second;
    double tb;
    if (k < branch.size()) {
      tb = branch[k].first;
    } else if (std::isfinite(trace.failure_t)) {
      tb = trace.failure_t;
    } else {
      e.obstruction = "end of homotopy reached above the target";
      e.min_u = min_of(ua);
      e.t = ta;
      out.push_back(std::move(e));
      continue;
    }
    for (std::size_t it = 0; it < opt.max_bisections && !e.achieved; ++it) {
      const double tm = 0.5 * (ta + tb);
      if (!(tm > ta && tm < tb)) break;
      const SolveReport r = path.solve(tm, path.lowered(ua, tm - ta, 1.0), hopt.solver);
      if (!r.converged()) {
        tb = tm;
        continue;
      }
      const double mu = min_of(r.solution);
      if (mu > tau) {
        ta = tm;
        ua = r.solution;
      } else if (mu >= opt.accept_low * tau) {
        accept(tm, r.solution);
      } else {
        tb = tm;
      }
    }
    if (!e.achieved) {
      e.t = ta;
      e.min_u = min_of(ua);
      e.boundary_level = path.level(ta);
      e.obstruction = "branch ends before min u reaches the target (fold or nonexistence near t = " +
                      std::to_string(tb) + ")";
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace singlab

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "singlab/acceptance.hpp"
#include "singlab/analysis.hpp"
#include "singlab/continuation.hpp"
#include "singlab/experiments.hpp"
#include "singlab/format.hpp"
#include "singlab/linsolve.hpp"
#include "singlab/radial.hpp"
#include "singlab/solver.hpp"
#include "singlab/stability.hpp"

namespace singlab::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"radial", "bifurcation", "solve", "stability",
                                              "continue", "estimates", "reproduce"};
  return names;
}

namespace {

struct Context {
  const Config& cfg;
  fs::path out;
  std::ostream& log;

  void write(const std::string& name, const std::string& text) const { write_file_atomic(out / name, text); }
  void plot(PlotKind kind, const std::string& data, const std::string& script) const {
    if (cfg.flag("output", "plots")) emit_plots(kind, out / data, out / script);
  }
};

int dimension(const Config& c) { return c.integer("problem", "n"); }

Nonlinearity nonlinearity(const Config& c) { return {c.real("problem", "m"), c.real("problem", "alpha")}; }

void require_inverse_power(const Config& c, const std::string& what) {
  if (c.real("problem", "alpha") != 1.0) throw ConfigError(what + " integrates Delta u = m/u only (alpha = 1)");
}

GridPtr grid_of(const Config& c) {
  const int n = dimension(c);
  const std::string d = c.text("problem", "domain");
  const double h = c.real("problem", "h");
  const double R = c.real("problem", "radius");
  try {
    if (d == "radial") return build_grid(RadialDomain{n, 0.0, R}, h);
    if (d == "annulus") return build_grid(RadialDomain{n, c.real("problem", "inner"), R}, h);
    if (d == "ball") return build_grid(BallDomain{n, R}, h);
    const double lo = c.real("problem", "lo"), hi = c.real("problem", "hi");
    if (d == "interval") {
      if (n != 1) throw ConfigError("domain = interval needs n = 1");
      return build_grid(IntervalDomain{lo, hi}, h);
    }
    return build_grid(BoxDomain{std::vector<double>(n, lo), std::vector<double>(n, hi)}, h);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

Field boundary_field(const GridPtr& g, double value) { return Field::constant(g, value); }

EpsWindow window_of(const Config& c) {
  EpsWindow w;
  w.lo = c.real("bifurcation", "eps_min");
  w.hi = c.real("bifurcation", "eps_max");
  w.samples = c.integer("bifurcation", "samples");
  if (!(w.hi > w.lo)) throw ConfigError("bifurcation.eps_max must exceed eps_min");
  return w;
}

// Maximal solution for constant data; fills a failed outcome otherwise.
bool solve_maximal(const Config& c, const GridPtr& g, double boundary, Field& u, Outcome& o) {
  MaximalOptions opt;
  opt.f = nonlinearity(c);
  opt.method = MaximalMethod::monotone_newton;
  const auto rep = maximal_solution(boundary_field(g, boundary), opt);
  if (rep.converged()) {
    u = rep.solution;
    return true;
  }
  o.results["solve"] = to_json(rep, boundary_field(g, boundary));
  o.exit_code = rep.nonexistence() ? nonexistence : no_convergence;
  o.status = rep.nonexistence() ? "nonexistence" : "no-convergence";
  o.message = "no maximal solution for boundary value " + format_number(boundary) + ": " + to_string(rep.status);
  return false;
}

Outcome radial(const Context& ctx) {
  const Config& c = ctx.cfg;
  require_inverse_power(c, "radial");
  const int n = dimension(c);
  const double m = c.real("problem", "m");
  Outcome o;
  std::vector<RadialProfile> profiles;
  Json list = Json::array();
  for (double eps : c.reals("radial", "eps")) {
    profiles.push_back(integrate_radial(eps, n, m, c.real("radial", "r_max"), c.real("radial", "tol")));
    const auto& p = profiles.back();
    Json j;
    j["eps"] = eps;
    j["u_end"] = p.end_value();
    j["r_end"] = p.end_radius();
    j["conical_deviation"] = m == n - 1.0 ? Json(conical_deviation(p)) : Json(nullptr);
    j["accepted_steps"] = p.accepted;
    j["rejected_steps"] = p.rejected;
    list.push_back(j);
  }
  const auto scan = scan_shooting_map(n, m, window_of(c), c.real("radial", "tol"));
  ctx.write("profiles.csv", profiles_csv(profiles));
  ctx.write("scan.csv", scan_csv(scan));
  ctx.plot(PlotKind::profiles, "profiles.csv", "profiles.gp");
  ctx.plot(PlotKind::scan, "scan.csv", "scan.gp");
  o.results["profiles"] = list;
  o.results["scan"] = {{"samples", scan.eps.size()},
                       {"min_S", *std::min_element(scan.value.begin(), scan.value.end())},
                       {"max_S", *std::max_element(scan.value.begin(), scan.value.end())}};
  o.status = "ok";
  return o;
}

Outcome bifurcation(const Context& ctx) {
  const Config& c = ctx.cfg;
  require_inverse_power(c, "bifurcation");
  const int n = dimension(c);
  const double m = c.real("problem", "m");
  const EpsWindow w = window_of(c);
  const double tol = c.real("bifurcation", "tol");
  const auto b = bifurcation_constants(n, m, w, tol);
  Outcome o;
  o.results = to_json(b);
  Json counts = Json::array();
  for (double C : c.reals("bifurcation", "count_at")) {
    const auto roots = solve_dirichlet_radial(n, m, C, w, 1e-8, tol);
    Json eps = Json::array();
    for (const auto& p : roots) eps.push_back(p.eps);
    counts.push_back({{"C", C}, {"solutions", roots.size()}, {"eps", eps}});
  }
  o.results["counts"] = counts;
  ctx.write("scan.csv", scan_csv(b.scan));
  ctx.plot(PlotKind::scan, "scan.csv", "scan.gp");
  ctx.log << "C1 = " << format_number(b.c1) << ", C2 = " << format_number(b.c2) << "\n";
  o.status = "ok";
  return o;
}

Outcome solve(const Context& ctx) {
  const Config& c = ctx.cfg;
  const GridPtr g = grid_of(c);
  const double C = c.real("solve", "boundary");
  const Field boundary = boundary_field(g, C);
  const std::string method = c.text("solve", "method");
  SolveReport rep;
  if (method == "newton") {
    NewtonOptions opt;
    opt.f = nonlinearity(c);
    opt.tol = c.real("solve", "tol");
    opt.max_iter = static_cast<std::size_t>(c.integer("solve", "max_iter"));
    const double s = c.real("solve", "initial");
    Field init = Field::constant(g, s > 0.0 ? s : C);
    for (std::size_t i : g->boundary()) init[i] = C;
    rep = newton_solve(init, boundary, opt);
  } else {
    MaximalOptions opt;
    opt.f = nonlinearity(c);
    opt.tol = c.real("solve", "tol");
    opt.max_iter = static_cast<std::size_t>(c.integer("solve", "max_iter"));
    opt.method = method == "maximal" ? MaximalMethod::picard : MaximalMethod::monotone_newton;
    rep = maximal_solution(boundary, opt);
  }
  Outcome o;
  o.results = to_json(rep, boundary);
  o.results["method"] = method;
  ctx.write("solve.json", o.results.dump(2) + "\n");
  if (rep.converged()) {
    ctx.write("solution.csv", field_csv(rep.solution));
    o.status = "converged";
  } else if (method != "newton" && rep.nonexistence()) {
    o.exit_code = nonexistence;
    o.status = "nonexistence";
    o.message = "iteration from above reports " + to_string(rep.status) + ": no solution for this boundary data";
  } else {
    o.exit_code = no_convergence;
    o.status = "no-convergence";
    o.message = "solver stopped with status " + to_string(rep.status);
  }
  return o;
}

Outcome stability(const Context& ctx) {
  const Config& c = ctx.cfg;
  const GridPtr g = grid_of(c);
  const Nonlinearity f = nonlinearity(c);
  Outcome o;
  Field u;
  const std::string which = c.text("stability", "field");
  if (which == "cone") {
    if (dimension(c) < 2) throw ConfigError("stability.field = cone needs n >= 2");
    if (f.alpha != 1.0) throw ConfigError("the cone solves the alpha = 1 equation only");
    u = cone_field(g, f.m);
  } else if (!solve_maximal(c, g, c.real("stability", "boundary"), u, o)) {
    return o;
  }
  const auto rep = smallest_eigenvalue(stability_operator(u, f));
  Json spec = to_json(rep);
  spec["field"] = which;
  spec["stable"] = rep.lambda_min >= -c.real("stability", "tol");
  o.results = spec;
  if (c.flag("stability", "witness") && g->kind() == GridKind::radial && !g->has_center() && g->dim() >= 2 &&
      g->dim() <= 6) {
    const auto w = hardy_witness(g->dim(), g);
    o.results["witness"] = {{"quotient", w.quotient}, {"negative", w.negative}, {"warning", w.warning}};
  }
  ctx.write("spectrum.json", o.results.dump(2) + "\n");
  ctx.write("eigenvector.csv", field_csv(rep.eigenvector));
  if (rep.converged) {
    o.status = "ok";
  } else {
    o.exit_code = no_convergence;
    o.status = "no-convergence";
    o.message = "inverse iteration did not reach its tolerance";
  }
  return o;
}

Outcome continuation(const Context& ctx) {
  const Config& c = ctx.cfg;
  const GridPtr g = grid_of(c);
  HomotopyOptions h;
  h.steps = static_cast<std::size_t>(c.integer("continue", "steps"));
  h.min_dt = c.real("continue", "min_dt");
  h.track_stability = c.flag("continue", "stability");
  h.solver.f = nonlinearity(c);
  const double phi0 = c.real("continue", "phi0"), phi1 = c.real("continue", "phi1");
  if (phi1 > phi0) throw ConfigError("continue.phi1 must not exceed phi0");
  const Field a = boundary_field(g, phi0), b = boundary_field(g, phi1);
  Outcome o;
  const auto targets = c.reals("continue", "targets");
  if (targets.empty()) {
    h.keep_solutions = false;
    const auto trace = homotopy_run(a, b, h);
    o.results = to_json(trace);
    ctx.write("trace.csv", trace_csv(trace));
    ctx.plot(PlotKind::trace, "trace.csv", "trace.gp");
    o.status = to_string(trace.status);
    if (trace.status == TraceStatus::nonexistence_detected) {
      o.exit_code = nonexistence;
      o.message = "continuation stopped: no solution beyond t = " + format_number(trace.failure_t);
    } else if (trace.status == TraceStatus::stalled || trace.status == TraceStatus::max_steps) {
      o.exit_code = no_convergence;
      o.message = "continuation " + o.status + " at t = " + format_number(trace.failure_t);
    }
    return o;
  }
  SequenceOptions s;
  s.homotopy = h;
  const auto seq = singular_sequence(a, b, targets, s);
  Json list = Json::array();
  bool all = true;
  for (const auto& e : seq) {
    list.push_back(to_json(e));
    all = all && e.achieved;
  }
  o.results["sequence"] = list;
  ctx.write("sequence.csv", sequence_csv(seq));
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (seq[k].solution) ctx.write("sequence_" + std::to_string(k) + ".csv", field_csv(*seq[k].solution));
  o.status = all ? "ok" : "targets-unreached";
  if (!all) {
    o.exit_code = no_convergence;
    o.message = "some targets were not reached; see obstruction fields";
  }
  return o;
}

Outcome estimates(const Context& ctx) {
  const Config& c = ctx.cfg;
  const GridPtr g = grid_of(c);
  const Nonlinearity f = nonlinearity(c);
  const int n = dimension(c);
  Outcome o;
  Field u;
  const std::string which = c.text("estimates", "field");
  if (which == "cone") {
    if (n < 2) throw ConfigError("estimates.field = cone needs n >= 2");
    u = cone_field(g, f.m);
  } else if (!solve_maximal(c, g, c.real("estimates", "boundary"), u, o)) {
    return o;
  }
  EstimateReport rep;
  Json skipped = Json::array();
  auto attempt = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      skipped.push_back(what + ": " + e.what());
    }
  };
  double floor = INFINITY;
  for (std::size_t i : g->boundary()) floor = std::min(floor, u[i]);

  attempt("positivity", [&] { rep.append(positivity_check(u, {}, c.real("estimates", "rho"))); });
  for (double p : c.reals("estimates", "p"))
    attempt("p_integral", [&] { rep.append(p_integral_check(u, p, floor, p_integral_constant(p))); });
  attempt("w12_p2", [&] {
    const Field phi = harmonic_extension(u, assemble_laplacian(g));
    rep.append(w12_p2_check(u, phi, floor, w12_constant()));
  });
  double tau = c.real("estimates", "tau");
  if (tau == 0.0) tau = 3.0 * g->spacing() * std::sqrt(f.m / std::max(1, n - 1));
  attempt("box_dimension", [&] { rep.append(box_dimension(u, tau, c.reals("estimates", "scales"))); });

  o.results = to_json(rep);
  attempt("holder", [&] {
    const double alpha = c.real("estimates", "holder_alpha");
    const Region region{c.real("estimates", "holder_inner"), INFINITY};
    const auto seed = static_cast<std::uint64_t>(c.integer("output", "seed"));
    o.results["holder"] = {{"alpha", alpha}, {"r_lo", region.r_lo}, {"quotient", holder_quotient(u, alpha, region, seed)}};
  });
  if (const double R = c.real("estimates", "log_trick_R"); R > 0.0) {
    attempt("log_trick", [&] {
      const auto lt = log_trick_functional(u, R);
      o.results["log_trick"] = {{"R", lt.R}, {"value", lt.value}, {"cutoff_energy", lt.cutoff_energy}};
    });
  }
  o.results["skipped"] = skipped;
  ctx.write("estimates.csv", estimates_csv(rep));
  ctx.write("estimates.json", o.results.dump(2) + "\n");
  o.status = rep.pass() ? "pass" : "fail";
  return o;
}

Outcome reproduce(const Context& ctx) {
  Outcome o;
  std::string csv = "id,name,pass,detail\n";
  Json list = Json::array();
  Json timing = Json::array();
  int passed = 0;
  for (int id = 1; id <= acceptance::count(); ++id) {
    const auto a = acceptance::run(id);
    passed += a.pass ? 1 : 0;
    std::string detail = a.detail;
    for (auto& ch : detail)
      if (ch == '"') ch = '\'';
    csv += std::to_string(a.id) + "," + a.name + "," + (a.pass ? "true" : "false") + ",\"" + detail + "\"\n";
    list.push_back({{"id", a.id}, {"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    timing.push_back({{"id", a.id}, {"seconds", a.seconds}, {"budget", a.budget}});
    ctx.log << (a.pass ? "PASS " : "FAIL ") << a.id << ". " << a.name << "\n";
  }
  ctx.write("acceptance.csv", csv);
  o.results["criteria"] = list;
  o.results["passed"] = passed;
  o.results["total"] = acceptance::count();
  o.status = passed == acceptance::count() ? "all-passed" : "some-failed";
  o.metadata["criteria_timing"] = timing;
  return o;
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

void write_diagnostic(const fs::path& out, const std::string& subcommand, int exit_code, const std::string& message) {
  Json d;
  d["subcommand"] = subcommand;
  d["exit_code"] = exit_code;
  d["message"] = message;
  write_file_atomic(out / "diagnostic.json", d.dump(2) + "\n");
}

Outcome run(const std::string& subcommand, const Config& config, const fs::path& out, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const Context ctx{config, out, log};
  Outcome o;
  if (subcommand == "radial") o = radial(ctx);
  else if (subcommand == "bifurcation") o = bifurcation(ctx);
  else if (subcommand == "solve") o = solve(ctx);
  else if (subcommand == "stability") o = stability(ctx);
  else if (subcommand == "continue") o = continuation(ctx);
  else if (subcommand == "estimates") o = estimates(ctx);
  else if (subcommand == "reproduce") o = reproduce(ctx);
  else throw ConfigError("unknown subcommand " + subcommand);

  Json meta = o.metadata.is_null() ? Json::object() : o.metadata;
  meta["subcommand"] = subcommand;
  meta["finished"] = timestamp();
  meta["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file_atomic(out / "metadata.json", meta.dump(2) + "\n");

  Json s;
  s["subcommand"] = subcommand;
  s["config_hash"] = config.hash();
  s["results"] = o.results;
  s["status"] = o.status;
  write_file_atomic(out / "config.ini", config.canonical());
  write_file_atomic(out / "summary.json", s.dump(2) + "\n");
  if (o.exit_code != ok) write_diagnostic(out, subcommand, o.exit_code, o.message);
  return o;
}

}  // namespace singlab::cli

#include "singlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "singlab/format.hpp"

namespace singlab {

namespace {

// CSV cell: numbers in shortest round-trip form, nan/inf spelled out.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

Json jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double inner_radius(const Grid& g) { return g.kind() == GridKind::radial && !g.has_center() ? g.first_radius() : 0.0; }

}  // namespace

Json to_json(const SolveReport& r, const Field& boundary) {
  const Grid& g = boundary.grid();
  double lo = INFINITY, hi = -INFINITY, mean = 0.0;
  for (std::size_t i : g.boundary()) {
    lo = std::min(lo, boundary[i]);
    hi = std::max(hi, boundary[i]);
    mean += boundary[i];
  }
  mean /= static_cast<double>(g.boundary().size());
  Json j;
  j["converged"] = r.converged();
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["residual"] = jnum(r.residual);
  j["min_u"] = jnum(r.min_u);
  j["h"] = g.spacing();
  j["n"] = g.dim();
  j["m"] = r.f.m;
  j["alpha"] = r.f.alpha;
  j["boundary_summary"] = {{"min", jnum(lo)}, {"max", jnum(hi)}, {"mean", jnum(mean)}, {"nodes", g.boundary().size()}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

Json to_json(const SpectralReport& r) {
  const Grid& g = r.eigenvector.grid();
  Json j;
  j["lambda_min"] = jnum(r.lambda_min);
  j["iters"] = r.iterations;
  j["residual"] = jnum(r.residual);
  j["residual_floor"] = jnum(r.residual_floor);
  j["converged"] = r.converged;
  j["n"] = g.dim();
  j["h"] = g.spacing();
  j["delta"] = inner_radius(g);
  return j;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["inequality"] = c.inequality;
  j["tag"] = c.tag;
  Json p = Json::object();
  for (const auto& [k, v] : c.params) p[k] = jnum(v);
  j["params"] = p;
  j["value"] = jnum(c.value);
  j["bound"] = jnum(c.bound);
  j["relation"] = c.relation == Relation::at_least ? ">=" : "<=";
  j["pass"] = c.pass;
  j["applicable"] = c.applicable;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const EstimateReport& r) {
  Json j;
  j["pass"] = r.pass();
  j["checks"] = Json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

Json to_json(const BifurcationConstants& b) {
  Json j;
  j["n"] = b.dim;
  j["m"] = b.m;
  j["c1"] = b.c1;
  j["eps_c1"] = b.eps_c1;
  j["c2"] = b.c2;
  j["eps_c2"] = b.eps_c2;
  j["monotone"] = b.monotone;
  j["c1_on_window_edge"] = b.c1_on_window_edge;
  j["c2_on_window_edge"] = b.c2_on_window_edge;
  j["window"] = {{"eps_min", b.window.lo}, {"eps_max", b.window.hi}, {"samples", b.window.samples}};
  j["warnings"] = b.warnings;
  return j;
}

Json to_json(const ContinuationTrace& t) {
  Json j;
  j["status"] = to_string(t.status);
  j["accepted_steps"] = std::count_if(t.steps.begin(), t.steps.end(), [](const TraceStep& s) { return s.converged; });
  j["failure_t"] = jnum(t.failure_t);
  j["attempts"] = t.attempts;
  j["restarts"] = t.restarts;
  const TraceStep* last = nullptr;
  for (const auto& s : t.steps)
    if (s.converged) last = &s;
  if (last) {
    j["last_converged"] = {{"t", last->t},
                           {"boundary_level", last->boundary_level},
                           {"min_u", jnum(last->min_u)},
                           {"lambda_min", jnum(last->lambda_min)}};
  }
  Json folds = Json::array();
  for (const auto& f : fold_detect(t))
    folds.push_back({{"t_lo", f.t_lo}, {"t_hi", f.t_hi}, {"level_lo", f.level_lo}, {"level_hi", f.level_hi}, {"reason", f.reason}});
  j["folds"] = folds;
  j["notes"] = t.notes;
  return j;
}

Json to_json(const SequenceEntry& e) {
  Json j;
  j["target"] = e.target;
  j["achieved"] = e.achieved;
  j["min_u"] = jnum(e.min_u);
  j["t"] = jnum(e.t);
  j["boundary_level"] = jnum(e.boundary_level);
  j["cone_distance"] = jnum(e.cone_distance);
  if (!e.obstruction.empty()) j["obstruction"] = e.obstruction;
  return j;
}

std::string estimates_csv(const EstimateReport& r) {
  std::string out = "check_name,params,value,bound,relation,pass,applicable\n";
  for (const auto& c : r.checks) {
    std::string params;
    for (const auto& [k, v] : c.params) params += (params.empty() ? "" : ";") + k + "=" + num(v);
    out += quote(c.name) + "," + quote(params) + "," + num(c.value) + "," + num(c.bound) + "," +
           (c.relation == Relation::at_least ? ">=" : "<=") + "," + (c.pass ? "true" : "false") + "," +
           (c.applicable ? "true" : "false") + "\n";
  }
  return out;
}

std::string trace_csv(const ContinuationTrace& t) {
  std::string out = "t,boundary_level,min_u,lambda_min,iters,residual,status\n";
  for (const auto& s : t.steps)
    out += num(s.t) + "," + num(s.boundary_level) + "," + num(s.min_u) + "," + num(s.lambda_min) + "," +
           std::to_string(s.iterations) + "," + num(s.residual) + "," + s.status + "\n";
  return out;
}

std::string field_csv(const Field& u) {
  const Grid& g = u.grid();
  std::string out;
  std::istringstream header(g.header());
  for (std::string line; std::getline(header, line);) out += "# " + line + "\n";
  if (g.kind() == GridKind::radial) {
    out += "r,value\n";
  } else {
    for (int a = 0; a < g.axes(); ++a) out += "x" + std::to_string(a) + ",";
    out += "value\n";
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (double x : g.coords(i)) out += num(x) + ",";
    out += num(u[i]) + "\n";
  }
  return out;
}

std::string profiles_csv(const std::vector<RadialProfile>& profiles) {
  std::string out = "eps,r,u,du\n";
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.r.size(); ++i)
      out += num(p.eps) + "," + num(p.r[i]) + "," + num(p.u[i]) + "," + num(p.du[i]) + "\n";
  return out;
}

std::string scan_csv(const ShootingScan& scan) {
  std::string out = "eps,S\n";
  for (std::size_t i = 0; i < scan.eps.size(); ++i) out += num(scan.eps[i]) + "," + num(scan.value[i]) + "\n";
  return out;
}

std::string sequence_csv(const std::vector<SequenceEntry>& seq) {
  std::string out = "target,achieved,min_u,t,boundary_level,cone_distance,obstruction\n";
  for (const auto& e : seq)
    out += num(e.target) + "," + (e.achieved ? "true" : "false") + "," + num(e.min_u) + "," + num(e.t) + "," +
           num(e.boundary_level) + "," + num(e.cone_distance) + "," + quote(e.obstruction) + "\n";
  return out;
}

std::string emit_plots(PlotKind kind, const std::filesystem::path& data, const std::filesystem::path& script) {
  const std::string file = data.filename().string();
  const std::string stem = script.stem().string();
  std::string s = "set datafile separator ','\nset key autotitle columnhead\n";
  switch (kind) {
    case PlotKind::scan:
      s += "set terminal pngcairo size 900,600\nset output '" + stem + ".png'\n";
      s += "set logscale x\nset xlabel 'eps'\nset ylabel 'S(eps) = u_eps(1)'\n";
      s += "plot '" + file + "' using 1:2 with lines title 'S(eps)', 1 with lines dashtype 2 title 'C = 1'\n";
      break;
    case PlotKind::trace:
      s += "set terminal pngcairo size 900,900\nset output '" + stem + ".png'\n";
      s += "set multiplot layout 2,1\nset xlabel 't'\n";
      s += "set ylabel 'min u'\nplot '" + file + "' using 1:3 with linespoints title 'min u'\n";
      s += "set ylabel 'lambda_min'\nplot '" + file + "' using 1:4 with linespoints title 'lambda_min', 0 with lines dashtype 2 notitle\n";
      s += "unset multiplot\n";
      break;
    case PlotKind::profiles:
      s += "set terminal pngcairo size 900,600\nset output '" + stem + ".png'\n";
      s += "set xlabel 'r'\nset ylabel 'u'\n";
      s += "plot '" + file + "' using 2:3 with points pointtype 7 pointsize 0.3 title 'u_eps', x with lines dashtype 2 title 'u = r'\n";
      break;
  }
  write_file_atomic(script, s);
  return s;
}

}  // namespace singlab

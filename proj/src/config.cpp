#include "singlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "singlab/format.hpp"

namespace singlab {

namespace {

KeySpec key(std::string section, std::string name, KeyKind kind, std::string fallback, std::string doc) {
  KeySpec k;
  k.section = std::move(section);
  k.key = std::move(name);
  k.kind = kind;
  k.fallback = std::move(fallback);
  k.doc = std::move(doc);
  return k;
}

KeySpec positive(KeySpec k) {
  k.positive = true;
  return k;
}

KeySpec range(KeySpec k, double lo, double hi) {
  k.lo = lo;
  k.hi = hi;
  return k;
}

KeySpec choice(std::string section, std::string name, std::vector<std::string> options, std::string doc) {
  KeySpec k = key(std::move(section), std::move(name), KeyKind::choice, options.front(), std::move(doc));
  k.choices = std::move(options);
  return k;
}

std::vector<KeySpec> build_schema() {
  using K = KeyKind;
  return {
      range(key("problem", "n", K::integer, "3", "ambient dimension"), 1, 64),
      positive(key("problem", "m", K::real, "1", "coefficient: Delta u = m u^-alpha")),
      positive(key("problem", "alpha", K::real, "1", "exponent of the nonlinearity")),
      choice("problem", "domain", {"radial", "annulus", "ball", "box", "interval"},
             "radial ball, radial annulus, Cartesian ball, cube or interval"),
      positive(key("problem", "radius", K::real, "1", "outer radius (radial, annulus, ball)")),
      range(key("problem", "inner", K::real, "0.1", "inner radius (annulus)"), 0, 1e300),
      key("problem", "lo", K::real, "0", "cube / interval lower end per axis"),
      key("problem", "hi", K::real, "1", "cube / interval upper end per axis"),
      positive(key("problem", "h", K::real, "0.015625", "grid spacing")),

      key("radial", "eps", K::real_list, "0.05,0.2", "central values u(0) to integrate"),
      positive(key("radial", "r_max", K::real, "1", "integration end")),
      positive(key("radial", "tol", K::real, "1e-10", "local error per unit step")),

      positive(key("bifurcation", "eps_min", K::real, "0.001", "scan window lower end")),
      positive(key("bifurcation", "eps_max", K::real, "100", "scan window upper end")),
      range(key("bifurcation", "samples", K::integer, "400", "log-spaced scan samples"), 8, 1e6),
      positive(key("bifurcation", "tol", K::real, "1e-10", "integrator tolerance")),
      key("bifurcation", "count_at", K::real_list, "", "boundary values at which to count solutions"),

      positive(key("solve", "boundary", K::real, "2", "constant Dirichlet data")),
      choice("solve", "method", {"maximal", "monotone_newton", "newton"},
             "T-iteration from above, its Newton-accelerated form, or damped Newton"),
      range(key("solve", "initial", K::real, "0", "Newton start value; 0 uses the boundary value"), 0, 1e300),
      positive(key("solve", "tol", K::real, "1e-9", "residual tolerance")),
      range(key("solve", "max_iter", K::integer, "500", "iteration cap"), 1, 1e7),

      choice("stability", "field", {"cone", "maximal"}, "cone |x| sqrt(m/(n-1)) or the maximal solution"),
      positive(key("stability", "boundary", K::real, "2", "Dirichlet data for field = maximal")),
      positive(key("stability", "tol", K::real, "1e-6", "stable iff lambda_min >= -tol")),
      key("stability", "witness", K::flag, "true", "also evaluate the Hardy witness (annulus, n <= 6)"),

      positive(key("continue", "phi0", K::real, "2", "start boundary value")),
      positive(key("continue", "phi1", K::real, "0.05", "end boundary value")),
      range(key("continue", "steps", K::integer, "20", "nominal steps"), 1, 1e6),
      positive(key("continue", "min_dt", K::real, "0.0001", "smallest step before restarts")),
      key("continue", "targets", K::real_list, "", "min u targets for a singular sequence"),
      key("continue", "stability", K::flag, "true", "track lambda_min along the path"),

      choice("estimates", "field", {"cone", "maximal"}, "field to examine"),
      positive(key("estimates", "boundary", K::real, "2", "Dirichlet data for field = maximal")),
      positive(key("estimates", "rho", K::real, "0.25", "positivity ball radius")),
      key("estimates", "p", K::real_list, "2,4,6.5", "exponents for the p-integral"),
      range(key("estimates", "holder_alpha", K::real, "0.9", "Hoelder exponent"), 1e-6, 1),
      range(key("estimates", "holder_inner", K::real, "0.1", "inner radius of the Hoelder annulus"), 0, 1e300),
      range(key("estimates", "tau", K::real, "0", "sublevel threshold; 0 uses 3h times the cone slope"), 0, 1e300),
      key("estimates", "scales", K::real_list, "0.0625,0.03125,0.015625,0.0078125", "box sides, decreasing"),
      range(key("estimates", "log_trick_R", K::real, "0", "log-trick radius R > 1; 0 skips"), 0, 1e300),

      range(key("output", "seed", K::integer, "0", "seed of the sampled Hoelder verifier"), 0, 2147483647),
      key("output", "plots", K::flag, "true", "emit gnuplot scripts"),
  };
}

const KeySpec& find(const std::string& section, const std::string& name) {
  for (const auto& k : config_schema())
    if (k.section == section && k.key == name) return k;
  throw ConfigError("unknown key " + section + "." + name);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const KeySpec& k, const std::string& v) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(k.section + "." + k.key + ": not a number: '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x)) throw ConfigError(k.section + "." + k.key + ": not a number: '" + v + "'");
  if (k.positive && !(x > 0.0)) throw ConfigError(k.section + "." + k.key + " must be positive");
  if (x < k.lo || x > k.hi)
    throw ConfigError(k.section + "." + k.key + " must lie in [" + format_number(k.lo) + ", " + format_number(k.hi) + "]");
  return x;
}

// Validates and returns the canonical spelling.
std::string normalize(const KeySpec& k, const std::string& raw) {
  const std::string v = trim(raw);
  switch (k.kind) {
    case KeyKind::integer: {
      const double x = parse_real(k, v);
      if (x != std::floor(x)) throw ConfigError(k.section + "." + k.key + " must be an integer");
      return std::to_string(static_cast<long long>(x));
    }
    case KeyKind::real: return format_number(parse_real(k, v));
    case KeyKind::real_list: {
      std::string out;
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(k.section + "." + k.key + ": empty list entry");
        if (!out.empty()) out += ',';
        out += format_number(parse_real(k, item));
      }
      return out;
    }
    case KeyKind::choice:
      if (std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end())
        throw ConfigError(k.section + "." + k.key + ": unknown value '" + v + "'");
      return v;
    case KeyKind::flag:
      if (v == "true" || v == "1" || v == "yes") return "true";
      if (v == "false" || v == "0" || v == "no") return "false";
      throw ConfigError(k.section + "." + k.key + ": expected true or false");
  }
  return v;
}

}  // namespace

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = build_schema();
  return schema;
}

Config::Config() {
  for (const auto& k : config_schema()) values_[k.section + "." + k.key] = normalize(k, k.fallback);
}

void Config::set(const std::string& section, const std::string& name, const std::string& value) {
  values_[section + "." + name] = normalize(find(section, name), value);
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
      std::string(assignment.substr(eq + 1)));
}

Config Config::parse(std::string_view text) {
  Config c;
  std::string section;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    try {
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError("malformed section header");
        section = trim(std::string_view(t).substr(1, t.size() - 2));
        const auto& s = config_schema();
        if (std::none_of(s.begin(), s.end(), [&](const KeySpec& k) { return k.section == section; }))
          throw ConfigError("unknown section [" + section + "]");
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key = value");
      if (section.empty()) throw ConfigError("key outside any section");
      c.set(section, trim(std::string_view(t).substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string Config::text(const std::string& section, const std::string& name) const {
  find(section, name);
  return values_.at(section + "." + name);
}

double Config::real(const std::string& section, const std::string& name) const {
  return std::stod(text(section, name));
}

int Config::integer(const std::string& section, const std::string& name) const {
  return std::stoi(text(section, name));
}

bool Config::flag(const std::string& section, const std::string& name) const { return text(section, name) == "true"; }

std::vector<double> Config::reals(const std::string& section, const std::string& name) const {
  std::vector<double> out;
  std::stringstream ss(text(section, name));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::string Config::canonical() const {
  std::string out, section;
  for (const auto& k : config_schema()) {
    if (k.section != section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.key + " = " + values_.at(k.section + "." + k.key) + "\n";
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Config::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

std::string config_reference() {
  const Config defaults;
  std::string out, section;
  for (const auto& k : config_schema()) {
    if (k.section != section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    std::string doc = k.doc;
    if (k.kind == KeyKind::choice) {
      doc += " (";
      for (std::size_t i = 0; i < k.choices.size(); ++i) doc += (i ? "|" : "") + k.choices[i];
      doc += ")";
    }
    out += "# " + doc + "\n" + k.key + " = " + defaults.text(k.section, k.key) + "\n";
  }
  return out;
}

}  // namespace singlab

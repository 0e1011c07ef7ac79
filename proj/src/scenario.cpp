#include "rcnwave/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "rcnwave/errors.hpp"

namespace rcnwave {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Schema, path + ": " + what);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!allowed.count(k)) bad(path.empty() ? k : path + "." + k, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double num(const json& j, const std::string& path, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) bad(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(join(path, key), "must be finite");
  return x;
}

double need_num(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) bad(join(path, key), "missing");
  return num(j, path, key, 0);
}

double positive(const json& j, const std::string& path, const std::string& key, double def) {
  const double x = num(j, path, key, def);
  if (!(x > 0)) bad(join(path, key), "must be positive");
  return x;
}

int integer(const json& j, const std::string& path, const std::string& key, int def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) bad(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string text(const json& j, const std::string& path, const std::string& key,
                 const std::string& def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_string()) bad(join(path, key), "expected a string");
  return v.get<std::string>();
}

bool flag(const json& j, const std::string& path, const std::string& key, bool def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_boolean()) bad(join(path, key), "expected true/false");
  return v.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) bad(path, "expected finite numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

unsigned marker_bit(const std::string& s, const std::string& path) {
  if (s == "singularity_at_inner") return singularity_at_inner;
  if (s == "horizon_at_inner") return horizon_at_inner;
  if (s == "horizon_at_outer") return horizon_at_outer;
  if (s == "unbounded_outer") return unbounded_outer;
  bad(path, "unknown marker '" + s + "'");
}

// Wraps library errors raised while building a section so the message names it.
template <class F>
auto within(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    throw Error(ErrorCode::Schema, path + ": " + e.what());
  }
}

}  // namespace

RadialPotential parse_potential(const json& j) {
  const std::string P = "potential";
  if (!j.is_object()) bad(P, "expected an object");
  if (!j.contains("kind")) bad(P + ".kind", "missing");
  const std::string kind = text(j, P, "kind", "");
  const std::set<std::string> common{"kind", "dimension", "v_plus", "v_minus_equals_q", "domain"};
  auto allow = [&](std::set<std::string> extra) {
    extra.insert(common.begin(), common.end());
    only_keys(j, P, extra);
  };
  const int n = integer(j, P, "dimension", 3);
  if (n < 1) bad(P + ".dimension", "must be >= 1");

  RadialPotential p;
  if (kind == "minkowski") {
    allow({"c"});
    p = minkowski(n, positive(j, P, "c", 1));
  } else if (kind == "power_singular" || kind == "power_infinity") {
    allow({"alpha", "beta"});
    const double a = positive(j, P, "alpha", 1), b = positive(j, P, "beta", 1);
    p = kind == "power_singular" ? power_singular(a, b, n) : power_infinity(a, b, n);
  } else if (kind == "log_singular") {
    allow({"delta", "r_max"});
    const double d = positive(j, P, "delta", 0.5), rm = positive(j, P, "r_max", 0.5);
    if (rm >= 1) bad(P + ".r_max", "must be < 1");
    p = log_singular(d, n, rm);
  } else if (kind == "schwarzschild") {
    allow({"m", "c"});
    p = schwarzschild(positive(j, P, "m", 1), positive(j, P, "c", 1));
  } else if (kind == "reissner_nordstrom") {
    allow({"m", "e", "rn_case"});
    const double m = positive(j, P, "m", 1), e = positive(j, P, "e", 0.5);
    if (!j.contains("rn_case")) bad(P + ".rn_case", "missing");
    p = within(P + ".rn_case", [&] { return reissner_nordstrom(m, e, integer(j, P, "rn_case", 0)); });
  } else if (kind == "de_sitter") {
    allow({"ell"});
    p = de_sitter(positive(j, P, "ell", 1));
  } else if (kind == "coulomb") {
    allow({});
    p = coulomb(n);
  } else if (kind == "spectrum_hydrogen") {
    allow({"level"});
    const int lv = integer(j, P, "level", 1);
    if (lv < 1) bad(P + ".level", "must be >= 1");
    p = spectrum_hydrogen(lv, n);
  } else if (kind == "custom_table") {
    allow({"table"});
    if (!j.contains("table")) bad(P + ".table", "missing");
    const auto& t = j.at("table");
    only_keys(t, P + ".table", {"r", "q"});
    if (!t.contains("r") || !t.contains("q")) bad(P + ".table", "needs r and q arrays");
    auto r = numbers(t.at("r"), P + ".table.r");
    auto q = numbers(t.at("q"), P + ".table.q");
    p = custom_table(std::move(r), std::move(q), n);
  } else {
    bad(P + ".kind", "unknown potential kind '" + kind + "'");
  }

  // V_+ = coefficient * r^power (a bare number is a constant)
  if (j.contains("v_plus")) {
    const auto& v = j.at("v_plus");
    double c = 0, pw = 0;
    if (v.is_number()) {
      c = num(j, P, "v_plus", 0);
    } else {
      only_keys(v, P + ".v_plus", {"coefficient", "power"});
      c = num(v, P + ".v_plus", "coefficient", 0);
      pw = num(v, P + ".v_plus", "power", 0);
    }
    if (c != 0) p.v_plus = [c, pw](double r) { return pw == 0 ? c : c * std::pow(r, pw); };
  }
  p.v_minus_equals_q = flag(j, P, "v_minus_equals_q", false);

  if (j.contains("domain")) {
    const std::string D = P + ".domain";
    const auto& d = j.at("domain");
    only_keys(d, D, {"lo", "hi", "markers"});
    const double lo = num(d, D, "lo", p.r_min);
    double hi = p.r_max;
    if (d.contains("hi")) {
      if (d.at("hi").is_string() && d.at("hi").get<std::string>() == "inf")
        hi = std::numeric_limits<double>::infinity();
      else
        hi = num(d, D, "hi", hi);
    }
    if (lo < p.r_min || hi > p.r_max || !(lo < hi)) bad(D, "must lie inside the family's domain");
    if (d.contains("markers")) {
      const auto& ms = d.at("markers");
      if (!ms.is_array()) bad(D + ".markers", "expected an array of names");
      unsigned bits = 0;
      for (const auto& m : ms) {
        if (!m.is_string()) bad(D + ".markers", "expected names");
        bits |= marker_bit(m.get<std::string>(), D + ".markers");
      }
      p.markers = bits;
    }
    p.r_min = lo;
    p.r_max = hi;
  }
  return p;
}

TestProfile parse_profile(const json& j, const std::string& path) {
  only_keys(j, path, {"shape", "center", "width", "amplitude", "order"});
  TestProfile f;
  f.shape = within(path + ".shape", [&] { return shape_from_name(text(j, path, "shape", "polynomial_bump")); });
  const double c = need_num(j, path, "center");
  const double w = positive(j, path, "width", 1);
  f.a = c - w;
  f.b = c + w;
  f.amplitude = num(j, path, "amplitude", 1);
  f.order = integer(j, path, "order", 2);
  if (f.order < 1) bad(path + ".order", "must be >= 1");
  return f;
}

Scenario parse_scenario(const json& j) {
  only_keys(j, "", {"schema", "potential", "grid", "time", "initial", "source", "checks", "outputs"});
  if (!j.contains("schema")) bad("schema", "missing");
  if (text(j, "", "schema", "") != kSchemaVersion)
    bad("schema", std::string("expected \"") + kSchemaVersion + "\"");
  if (!j.contains("potential")) bad("potential", "missing");

  Scenario s;
  WaveScenario& w = s.wave;
  w.potential = parse_potential(j.at("potential"));

  if (j.contains("grid")) {
    const std::string G = "grid";
    const auto& g = j.at(G);
    only_keys(g, G, {"coordinate", "lo", "hi", "cells", "inner", "r_cut", "tau_anchor",
                     "tau_direction"});
    s.has_grid = true;
    const std::string c = text(g, G, "coordinate", "r");
    if (c == "r") w.coordinate = GridCoord::r;
    else if (c == "tau") w.coordinate = GridCoord::tau;
    else bad(G + ".coordinate", "expected \"r\" or \"tau\"");
    w.lo = need_num(g, G, "lo");
    w.hi = need_num(g, G, "hi");
    if (!(w.lo < w.hi)) bad(G + ".hi", "must exceed grid.lo");
    w.cells = integer(g, G, "cells", 100);
    if (w.cells < 2) bad(G + ".cells", "must be >= 2");
    const std::string inner = text(g, G, "inner", "dirichlet_zero");
    if (inner == "dirichlet_zero") w.inner = BoundaryKind::dirichlet_zero;
    else if (inner == "excised_cutoff") w.inner = BoundaryKind::excised_cutoff;
    else bad(G + ".inner", "expected dirichlet_zero or excised_cutoff");
    w.r_cut = num(g, G, "r_cut", 0);
    if (w.inner == BoundaryKind::excised_cutoff && !(w.r_cut > w.lo && w.r_cut < w.hi))
      bad(G + ".r_cut", "must lie inside (grid.lo, grid.hi)");
    if (g.contains("tau_anchor")) w.tau_anchor = num(g, G, "tau_anchor", 0);
    w.tau_direction = integer(g, G, "tau_direction", 0);
    if (w.tau_direction < -1 || w.tau_direction > 1) bad(G + ".tau_direction", "expected -1, 0 or 1");
  }

  if (j.contains("time")) {
    const std::string T = "time";
    const auto& t = j.at(T);
    only_keys(t, T, {"t_end", "cfl_fraction", "dynamics"});
    w.t_end = positive(t, T, "t_end", 1);
    w.cfl = positive(t, T, "cfl_fraction", 0.5);
    if (w.cfl > 1) bad(T + ".cfl_fraction", "must be <= 1");
    if (t.contains("dynamics"))
      w.dynamics = within(T + ".dynamics", [&] { return dynamics_from_name(text(t, T, "dynamics", "")); });
  }

  if (j.contains("initial")) {
    const auto& in = j.at("initial");
    only_keys(in, "initial", {"u0", "v0"});
    if (in.contains("u0") && !in.at("u0").is_null()) w.u0 = parse_profile(in.at("u0"), "initial.u0");
    if (in.contains("v0") && !in.at("v0").is_null()) w.v0 = parse_profile(in.at("v0"), "initial.v0");
  }

  // f(t, x) = profile(x) cos(omega t) for t_on <= t < t_off
  if (j.contains("source") && !j.at("source").is_null()) {
    const std::string S = "source";
    const auto& src = j.at(S);
    only_keys(src, S, {"shape", "center", "width", "amplitude", "order", "omega", "t_on", "t_off"});
    json prof = json::object();
    for (const char* k : {"shape", "center", "width", "amplitude", "order"})
      if (src.contains(k)) prof[k] = src.at(k);
    const TestProfile f = parse_profile(prof, S);
    const double om = num(src, S, "omega", 0), on = num(src, S, "t_on", 0);
    const double off = num(src, S, "t_off", std::numeric_limits<double>::max());
    w.source = [f, om, on, off](double t, double x) {
      if (t < on || t >= off) return 0.0;
      return f.value(x) * std::cos(om * t);
    };
  }

  if (j.contains("checks")) {
    const auto& cs = j.at("checks");
    if (!cs.is_array()) bad("checks", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string C = "checks[" + std::to_string(i) + "]";
      only_keys(cs[i], C, {"type", "params"});
      CheckDecl d;
      d.type = text(cs[i], C, "type", "");
      if (d.type == "cone") {
        if (cs[i].contains("params")) only_keys(cs[i].at("params"), C + ".params", {"tol", "speed"});
      } else if (d.type == "silo" || d.type == "energy") {
        if (cs[i].contains("params")) only_keys(cs[i].at("params"), C + ".params", {"tol"});
      } else {
        bad(C + ".type", "expected cone, silo or energy");
      }
      if (cs[i].contains("params")) d.params = cs[i].at("params");
      for (const auto& [k, v] : d.params.items())
        if (!v.is_number() || !(v.get<double>() > 0)) bad(C + ".params." + k, "must be a positive number");
      s.checks.push_back(std::move(d));
    }
  }

  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    only_keys(o, "outputs", {"dir", "snapshot_every"});
    s.out_dir = text(o, "outputs", "dir", ".");
    w.snapshot_every = integer(o, "outputs", "snapshot_every", 0);
    if (w.snapshot_every < 0) bad("outputs.snapshot_every", "must be >= 0");
  }

  if ((j.contains("time") || j.contains("initial") || !s.checks.empty()) && !s.has_grid)
    bad("grid", "missing (needed for time stepping)");
  return s;
}

Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Schema, "cannot open scenario '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Schema, file + ": " + e.what());
  }
  return parse_scenario(j);
}

std::string output_dir(const Scenario& s) {
  if (const char* env = std::getenv("RCNWAVE_OUT"); env && *env) return env;
  return s.out_dir;
}

SimulationOutcome simulate(const Scenario& s) {
  if (!s.has_grid) throw Error(ErrorCode::Schema, "grid: missing");
  SimulationOutcome o;
  o.trajectory = run_wave(s.wave);
  for (const auto& c : s.checks) {
    const double tol = c.params.value("tol", c.type == "energy" ? 1e-4 : 1e-8);
    CheckReport r;
    if (c.type == "cone") {
      r = verify_cone(o.trajectory, tol, c.params.value("speed", 1.0));
    } else if (c.type == "silo") {
      r = verify_silo(o.trajectory, tol);
    } else {
      // drift for source-free runs, the energy-inequality constant otherwise
      r.check = s.wave.source ? "energy_constant" : "energy_drift";
      r.worst_value = s.wave.source ? energy_constant(o.trajectory) : energy_drift(o.trajectory);
      r.pass = s.wave.source ? std::isfinite(r.worst_value) : r.worst_value <= tol;
    }
    o.all_pass = o.all_pass && r.pass;
    o.checks.push_back(std::move(r));
  }
  return o;
}

void write_outcome(const SimulationOutcome& o, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto& tr = o.trajectory;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
    std::ofstream f(fs::path(dir) / name);
    write_snapshot_csv(tr.grid, tr.snapshots[i], f);
  }
  {
    std::ofstream f(fs::path(dir) / "energy.csv");
    write_energy_csv(tr, f);
  }
  json checks = json::array();
  for (const auto& c : o.checks) checks.push_back(to_json(c));
  json j;
  j["dt"] = tr.dt;
  j["steps"] = tr.steps;
  j["dynamics"] = dynamics_name(tr.grid.dynamics);
  j["checks"] = checks;
  j["all_pass"] = o.all_pass;
  std::ofstream f(fs::path(dir) / "checks.json");
  f << dump17(j) << "\n";
}

}  // namespace rcnwave

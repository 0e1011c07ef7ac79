#include "rcnwave/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "rcnwave/quadratic_forms.hpp"
#include "rcnwave/rcn_certify.hpp"
#include "rcnwave/scenario.hpp"
#include "rcnwave/spacetimes.hpp"
#include "rcnwave/wave_sim.hpp"

namespace rcnwave {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InfeasibleCertificate:
    case ErrorCode::IndefiniteForm:
    case ErrorCode::CoverageGap:
      return exit_condition;
    case ErrorCode::BlowUp:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::DegenerateCell:
      return exit_numerical;
    default:
      return exit_usage;
  }
}

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CSV goes to --out when given, otherwise to the output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Usage("cannot write '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(x)) throw Usage("");
    return x;
  } catch (...) {
    throw Usage("bad number '" + s + "' in " + what);
  }
}

// horizon:KMIN:KMAX | infinity:R0:COUNT:EPS
std::vector<RcnWindow> parse_layers(const RadialPotential& p, const std::string& spec) {
  const auto f = split(spec, ':');
  if (f.size() == 3 && f[0] == "horizon") {
    const int k0 = static_cast<int>(to_double(f[1], "--layers")), k1 = static_cast<int>(to_double(f[2], "--layers"));
    if (k0 < 1 || k1 < k0) throw Usage("--layers: need 1 <= KMIN <= KMAX");
    return horizon_layers(p, k0, k1);
  }
  if (f.size() == 4 && f[0] == "infinity") {
    const double r0 = to_double(f[1], "--layers"), eps = to_double(f[3], "--layers");
    const int count = static_cast<int>(to_double(f[2], "--layers"));
    if (!(r0 > 0) || count < 1 || !(eps > 0)) throw Usage("--layers: need R0 > 0, COUNT >= 1, EPS > 0");
    return power_infinity_layers(p, r0, count, eps);
  }
  throw Usage("--layers expects horizon:KMIN:KMAX or infinity:R0:COUNT:EPS");
}

// zero | const:C | sine:K | power:C:P | bump:CENTER:WIDTH
Fn parse_rho(const std::string& spec) {
  const auto f = split(spec, ':');
  if (f.size() == 1 && f[0] == "zero") return [](double) { return 0.0; };
  if (f.size() == 2 && f[0] == "const") {
    const double c = to_double(f[1], "--rho-spec");
    return [c](double) { return c; };
  }
  if (f.size() == 2 && f[0] == "sine") {
    const double k = to_double(f[1], "--rho-spec") * M_PI;
    return [k](double r) { return k * k * std::sin(k * r); };
  }
  if (f.size() == 3 && f[0] == "power") {
    const double c = to_double(f[1], "--rho-spec"), pw = to_double(f[2], "--rho-spec");
    return [c, pw](double r) { return c * std::pow(r, pw); };
  }
  if (f.size() == 3 && f[0] == "bump") {
    const auto b = bump_at(to_double(f[1], "--rho-spec"), to_double(f[2], "--rho-spec"));
    return [b](double r) { return b.value(r); };
  }
  throw Usage("--rho-spec expects zero, const:C, sine:K, power:C:P or bump:CENTER:WIDTH");
}

void need(bool ok, const std::string& msg) {
  if (!ok) throw Usage(msg);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"radial inner-time geometry, RCN certificates and wave runs"};
  app.require_subcommand(1);

  std::string scenario, out_path, kind, layers, check, rho_spec, model = "minkowski", op = "tau";
  std::vector<double> r_values, window, range, h_coef{1.0}, centers, radii, region, support;
  double r_ref = NAN, delta = NAN, s_exp = 1, tau0 = 1, overlap = 0.2, delta_t = 0.5, alpha = 0,
         beta2 = 0, m = 1, c = 1, e = 0, ell = 1, t0 = 0, r0 = 0;
  int samples = 256, count = 50, trials = 1000, dim = 5, level = 1, n1 = 0, n2 = 0, cap = 0;
  std::uint64_t seed = 1;
  bool horizon_anchor = false, with_samples = false;

  auto* tau = app.add_subcommand("tau", "tau(r) on a list of radii or a chart over a range");
  tau->add_option("--scenario", scenario)->required();
  tau->add_option("--r-values", r_values);
  tau->add_option("--range", range)->expected(2);
  tau->add_option("--samples", samples);
  tau->add_option("--r-ref", r_ref);
  tau->add_option("--out", out_path);

  auto* rcn = app.add_subcommand("rcn-check", "search an RCN certificate on a window");
  rcn->add_option("--scenario", scenario)->required();
  rcn->add_option("--window", window)->expected(2)->required();
  rcn->add_option("--kind", kind);
  rcn->add_option("--r-ref", r_ref);
  rcn->add_option("--samples", samples);
  rcn->add_flag("--with-samples", with_samples);

  auto* sweep = app.add_subcommand("sweep", "uniform-delta sweep over layered windows");
  sweep->add_option("--scenario", scenario)->required();
  sweep->add_option("--layers", layers)->required();
  sweep->add_option("--delta", delta)->required();

  auto* forms = app.add_subcommand("forms", "quadratic-form checks");
  forms->add_option("--check", check)
      ->required()
      ->check(CLI::IsMember({"hardy", "positivity", "falsify", "nonnegativity", "ims", "minorant",
                             "self-adjoint"}));
  forms->add_option("--scenario", scenario);
  forms->add_option("--power", s_exp, "hardy: leading exponent s");
  forms->add_option("--coeffs", h_coef, "hardy: series coefficients");
  forms->add_option("--tau0", tau0);
  forms->add_option("--window", window)->expected(2);
  forms->add_option("--delta", delta);
  forms->add_option("--count", count);
  forms->add_option("--trials", trials);
  forms->add_option("--seed", seed);
  forms->add_option("--n", dim);
  forms->add_option("--beta2", beta2);
  forms->add_option("--alpha", alpha);
  forms->add_option("--centers", centers);
  forms->add_option("--radii", radii);
  forms->add_option("--overlap", overlap);
  forms->add_option("--region", region)->expected(2);
  forms->add_option("--delta-t", delta_t);
  forms->add_option("--support", support)->expected(2);

  auto* sim = app.add_subcommand("simulate", "run the wave solver and declared checks");
  sim->add_option("--scenario", scenario)->required();
  sim->add_option("--out", out_path, "output directory (RCNWAVE_OUT wins)");

  auto* dir = app.add_subcommand("dirichlet", "static problem H u = rho with zero boundary values");
  dir->add_option("--scenario", scenario)->required();
  dir->add_option("--rho-spec", rho_spec)->required();
  dir->add_option("--out", out_path);

  auto* st = app.add_subcommand("spacetime", "tortoise coordinates, cones, regimes");
  st->add_option("--model", model)->required();
  st->add_option("--op", op)->check(CLI::IsMember({"tau", "cone", "regime", "taylor"}));
  st->add_option("--m", m);
  st->add_option("--c", c);
  st->add_option("--e", e);
  st->add_option("--ell", ell);
  st->add_option("--level", level);
  st->add_flag("--horizon-anchor", horizon_anchor);
  st->add_option("--r", r_values);
  st->add_option("--t0", t0);
  st->add_option("--r0", r0);
  st->add_option("--out", out_path);

  auto* unc = app.add_subcommand("uncertainty", "exact hydrogen time-energy bound");
  auto* o1 = unc->add_option("--n1", n1);
  auto* o2 = unc->add_option("--n2", n2);
  auto* om = unc->add_option("--min", cap);
  o1->needs(o2);
  o2->needs(o1);
  om->excludes(o1)->excludes(o2);

  auto* sa = app.add_subcommand("self-adjoint", "correcting-potential feasibility");
  sa->add_option("--n", dim)->required();
  sa->add_option("--alpha", alpha)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*tau) {
      const auto s = load_scenario(scenario);
      const auto& p = s.wave.potential;
      const double ref = std::isnan(r_ref) ? default_tau_anchor(p) : r_ref;
      need(range.empty() != r_values.empty(), "tau: give exactly one of --r-values or --range");
      Sink sink(out_path, out);
      if (!range.empty()) {
        need(samples >= 2, "--samples must be >= 2");
        write_chart_csv(make_chart(p, ref, range[0], range[1], samples), *sink);
      } else {
        *sink << "r,tau\n";
        for (double r : r_values) write_csv_row(*sink, {r, tau_of_r(p, ref, r)});
      }
      return exit_ok;
    }

    if (*rcn) {
      const auto s = load_scenario(scenario);
      const auto k = kind.empty() ? WindowKind::singular_center : window_kind_from_name(kind);
      auto w = make_window(s.wave.potential, window[0], window[1], k);
      if (!std::isnan(r_ref)) w.r_ref = r_ref;
      SearchConfig cfg;
      cfg.samples = samples;
      const auto cert = certify_window(w, cfg);
      out << dump17(to_json(cert, with_samples)) << "\n";
      return cert.feasible ? exit_ok : exit_condition;
    }

    if (*sweep) {
      const auto s = load_scenario(scenario);
      need(delta > 0 && delta < 1, "--delta must lie in (0, 1)");
      const auto ws = parse_layers(s.wave.potential, layers);
      const auto rep = uniform_delta_sweep(s.wave.potential, ws, delta);
      out << dump17(to_json(rep)) << "\n";
      return rep.ok ? exit_ok : exit_condition;
    }

    if (*forms) {
      json j;
      bool holds = true;
      if (check == "hardy") {
        const auto r = hardy_check(HardyProfile{s_exp, h_coef}, tau0);
        j = {{"check", "hardy"}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}};
        holds = r.holds;
      } else if (check == "positivity" || check == "falsify") {
        need(!scenario.empty() && window.size() == 2, check + ": needs --scenario and --window");
        const auto s = load_scenario(scenario);
        const auto& p = s.wave.potential;
        auto w = make_window(p, window[0], window[1], WindowKind::singular_center);
        if (std::isnan(delta)) {
          const auto cert = certify_window(w);
          if (!cert.feasible) throw Error(ErrorCode::InfeasibleCertificate, "window not certified; pass --delta");
          delta = delta_bound(cert);
        }
        if (check == "falsify") {
          const auto rep = positivity_falsify(p, delta, window[0], window[1], trials, seed);
          j = to_json(rep);
          holds = !rep.found;
        } else {
          json rows = json::array();
          for (const auto& phi : random_bump_family(w, count, seed)) {
            const auto r = positivity_check(p, phi, w, delta);
            rows.push_back({{"profile", to_json(phi)}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}});
            holds = holds && r.holds;
          }
          j = {{"check", "positivity"}, {"delta", delta}, {"profiles", rows}, {"holds", holds}};
        }
      } else if (check == "nonnegativity") {
        const auto rep = nonnegativity_falsify(dim, beta2, trials, seed);
        j = to_json(rep);
        holds = !rep.found;
      } else if (check == "ims") {
        need(!centers.empty() && centers.size() == radii.size(), "ims: --centers and --radii must match");
        CutoffFamily fam;
        fam.centers = centers;
        fam.radii = radii;
        fam.overlap = overlap;
        if (region.size() == 2) fam.region_lo = region[0], fam.region_hi = region[1];
        const auto r = ims_error(fam);
        j = {{"check", "ims"}, {"sup", r.sup}, {"arg", r.arg}, {"max_coverage_dev", r.max_coverage_dev}};
      } else if (check == "minorant") {
        need(!scenario.empty() && support.size() == 2, "minorant: needs --scenario and --support");
        const auto s = load_scenario(scenario);
        const auto r = minorant_form_check(s.wave.potential, delta_t, bump(support[0], support[1]));
        j = {{"check", "minorant"}, {"gradient", r.gradient}, {"minorant", r.minorant},
             {"vminus", r.vminus}, {"holds", r.holds}};
        holds = r.holds;
      } else {
        const auto r = self_adjointness_feasible(dim, alpha);
        j = {{"check", "self-adjoint"}, {"feasible", r.feasible}, {"beta_witness", r.beta_witness},
             {"min_value", r.min_value}};
        holds = r.feasible;
      }
      out << dump17(j) << "\n";
      return holds ? exit_ok : exit_condition;
    }

    if (*sim) {
      auto s = load_scenario(scenario);
      if (!out_path.empty()) s.out_dir = out_path;
      const auto o = simulate(s);
      const std::string d = output_dir(s);
      write_outcome(o, d);
      json j;
      j["out_dir"] = d;
      j["steps"] = o.trajectory.steps;
      j["dt"] = o.trajectory.dt;
      j["snapshots"] = o.trajectory.snapshots.size();
      json cs = json::array();
      for (const auto& r : o.checks) cs.push_back({{"check", r.check}, {"pass", r.pass}, {"worst_value", r.worst_value}});
      j["checks"] = cs;
      j["all_pass"] = o.all_pass;
      out << dump17(j) << "\n";
      return o.all_pass ? exit_ok : exit_condition;
    }

    if (*dir) {
      const auto s = load_scenario(scenario);
      need(s.has_grid, "dirichlet: scenario needs a grid");
      const auto res = solve_dirichlet(s.wave, parse_rho(rho_spec));
      {
        Sink sink(out_path, out);
        *sink << "x,r,u\n";
        for (std::size_t i = 0; i < res.x.size(); ++i) write_csv_row(*sink, {res.x[i], res.r[i], res.u[i]});
      }
      if (!out_path.empty())
        out << dump17(json{{"residual", res.residual}, {"form_value", res.form_value}}) << "\n";
      return exit_ok;
    }

    if (*st) {
      SpacetimeModel md;
      md.family = family_from_name(model);
      md.m = m, md.c = c, md.e = e, md.ell = ell, md.level = level;
      md.horizon_anchor = horizon_anchor;
      md.validate();
      if (op == "cone") {
        const auto cone = light_cone(md, t0, r0, r_values);
        Sink sink(out_path, out);
        write_cone_csv(cone, *sink);
        return exit_ok;
      }
      need(!r_values.empty(), "spacetime: --r is required");
      if (op == "tau") {
        Sink sink(out_path, out);
        *sink << "r,tau\n";
        for (double r : r_values) write_csv_row(*sink, {r, spacetime_tau(md, r)});
        return exit_ok;
      }
      json rows = json::array();
      for (double r : r_values) {
        if (op == "regime") {
          need(md.family == SpacetimeFamily::reissner_nordstrom, "regime: needs --model reissner_nordstrom");
          rows.push_back({{"r", r}, {"case", rn_regime(md.m, md.e, r, horizon_anchor)}});
        } else {
          rows.push_back({{"r", r}, {"ratio", origin_taylor_ratio(md, r)}});
        }
      }
      out << dump17(rows) << "\n";
      return exit_ok;
    }

    if (*unc) {
      if (om->count()) {
        out << dump17(to_json(uncertainty_minimum(cap)), -1) << "\n";
      } else {
        need(o1->count() > 0, "uncertainty: give --n1/--n2 or --min");
        out << dump17(rational_json(uncertainty(n1, n2)), -1) << "\n";
      }
      return exit_ok;
    }

    if (*sa) {
      const auto r = self_adjointness_feasible(dim, alpha);
      out << dump17(json{{"feasible", r.feasible}, {"beta_witness", r.beta_witness}, {"min_value", r.min_value}})
          << "\n";
      return r.feasible ? exit_ok : exit_condition;
    }
  } catch (const Usage& ex) {
    err << "error: " << ex.what() << "\n";
    return exit_usage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return exit_code_for(ex.code());
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace rcnwave

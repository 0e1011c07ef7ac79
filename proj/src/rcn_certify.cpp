#include "rcnwave/rcn_certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rcnwave/errors.hpp"

namespace rcnwave {

const char* window_kind_name(WindowKind k) {
  switch (k) {
    case WindowKind::regular_point: return "regular_point";
    case WindowKind::singular_center: return "singular_center";
    case WindowKind::infinity_layer: return "infinity_layer";
  }
  return "?";
}

WindowKind window_kind_from_name(const std::string& s) {
  if (s == "regular_point") return WindowKind::regular_point;
  if (s == "singular_center") return WindowKind::singular_center;
  if (s == "infinity_layer") return WindowKind::infinity_layer;
  throw Error(ErrorCode::Schema, "unknown window kind '" + s + "'");
}

RcnWindow make_window(const RadialPotential& p, double r_lo, double r_hi, WindowKind kind) {
  if (!(r_lo < r_hi) || !(r_lo >= p.r_min) || !(r_hi <= p.r_max))
    throw Error(ErrorCode::OutOfDomain, "window outside the domain closure");
  RcnWindow w{p, r_lo, r_lo, r_hi, kind};
  switch (kind) {
    case WindowKind::singular_center: w.r_ref = r_lo; break;
    case WindowKind::regular_point: w.r_ref = 0.5 * (r_lo + r_hi); break;
    case WindowKind::infinity_layer:
      w.r_ref = (p.markers & horizon_at_inner) ? r_hi : r_lo;
      break;
  }
  if (!p.in_closure(w.r_ref)) throw Error(ErrorCode::OutOfDomain, "anchor on a horizon");
  return w;
}

std::vector<RcnWindow> power_infinity_layers(const RadialPotential& p, double r0, int count,
                                             double eps) {
  std::vector<RcnWindow> out;
  double r = r0;
  for (int i = 0; i < count; ++i) {
    const double next = r + eps * std::pow(r, -p.alpha);
    out.push_back(make_window(p, r, next, WindowKind::infinity_layer));
    r = next;
  }
  return out;
}

std::vector<RcnWindow> horizon_layers(const RadialPotential& p, int k_min, int k_max) {
  std::vector<RcnWindow> out;
  if (p.markers & horizon_at_inner) {
    const double e = p.r_min;
    const double L = std::isfinite(p.r_max) ? 0.5 * (p.r_max - e) : 1.0;
    for (int k = k_min; k <= k_max; ++k)
      out.push_back(make_window(p, e + std::ldexp(L, -k), e + std::ldexp(L, 1 - k),
                                WindowKind::infinity_layer));
  } else if (p.markers & horizon_at_outer) {
    const double e = p.r_max;
    const double L = 0.5 * (e - p.r_min);
    for (int k = k_min; k <= k_max; ++k)
      out.push_back(make_window(p, e - std::ldexp(L, 1 - k), e - std::ldexp(L, -k),
                                WindowKind::infinity_layer));
  } else {
    throw Error(ErrorCode::OutOfDomain, "potential has no horizon end");
  }
  return out;
}

std::vector<RcnSample> sample_window(const RcnWindow& w, int samples) {
  const auto& p = w.potential;
  const double mid = 0.5 * (w.r_lo + w.r_hi), half = 0.5 * (w.r_hi - w.r_lo);
  std::vector<double> rs;
  for (int k = samples - 1; k >= 0; --k) {
    const double r = mid + half * std::cos((2 * k + 1) * std::numbers::pi / (2.0 * samples));
    if (p.in_interior(r)) rs.push_back(r);
  }
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  QuadOptions opt;
  opt.singular_points = p.singular_points();
  const Fn f = [&p](double x) { return p.tau_density(x); };
  std::vector<RcnSample> out;
  double prev_r = 0, prev_tau = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double r = rs[i];
    // accumulate from the previous node; the first one goes to the anchor
    const double tau = i == 0 ? tau_of_r(p, w.r_ref, r) : prev_tau + integrate(f, prev_r, r, opt);
    prev_r = r;
    prev_tau = tau;
    if (tau == 0) continue;
    RcnSample s;
    s.r = r;
    s.tau = tau;
    s.dual = dual_from_tau(p, r, tau);
    s.qtau = p.q(r) * std::abs(tau);
    out.push_back(s);
  }
  return out;
}

NecessaryResult necessary_product(const RcnWindow& w, int samples) {
  if (samples < 16) throw Error(ErrorCode::OutOfRange, "need at least 16 samples");
  NecessaryResult res;
  const auto ss = sample_window(w, samples);
  if (ss.empty()) throw Error(ErrorCode::ZeroW, "tau vanishes at every sample");
  for (const auto& s : ss) {
    const double v = s.dual * s.qtau;
    if (v > res.sup) res.sup = v, res.arg_r = s.r;
  }
  return res;
}

double delta_from(double A, double delta0) { return (A - delta0) / (A + delta0); }

RcnCertificate certify_window(const RcnWindow& w, const SearchConfig& cfg) {
  RcnCertificate cert;
  cert.samples = sample_window(w, cfg.samples);
  if (cert.samples.empty())
    throw Error(ErrorCode::ZeroW, "tau vanishes at every sample (window below double range?)");
  for (const auto& s : cert.samples) {
    cert.sup_dual = std::max(cert.sup_dual, s.dual);
    cert.sup_qtau = std::max(cert.sup_qtau, s.qtau);
    cert.necessary_sup = std::max(cert.necessary_sup, s.dual * s.qtau);
  }
  const double sd2 = std::pow(cfg.inflate * cert.sup_dual, 2);
  const double sq2 = std::pow(cfg.inflate * cert.sup_qtau, 2);

  std::vector<double> d0s;
  if (cfg.pin_delta0) {
    d0s.push_back(*cfg.pin_delta0);
  } else {
    const int m = std::max(cfg.delta0_points, 2);
    for (int i = 0; i < m; ++i)
      d0s.push_back(cfg.delta0_lo * std::pow(cfg.delta0_hi / cfg.delta0_lo, double(i) / (m - 1)));
  }
  std::vector<double> cs(cfg.c_points);
  for (int i = 0; i < cfg.c_points; ++i)
    cs[i] = cfg.c_lo * std::pow(cfg.c_hi / cfg.c_lo, double(i) / (cfg.c_points - 1));

  bool have = false;
  double best_margin = -std::numeric_limits<double>::infinity(), best_delta = 1;
  for (double d0 : d0s) {
    std::vector<double> as;
    if (cfg.pin_A) {
      as.push_back(*cfg.pin_A);
    } else {
      for (int i = 1; i <= cfg.a_points; ++i)
        as.push_back(d0 + (1 - 2 * d0) * i / (cfg.a_points + 1.0));
    }
    for (double A : as) {
      if (!(A - d0 > 0) || !(A + d0 < 1)) continue;
      const double dl = delta_from(A, d0);
      for (double C : cs) {
        for (double e : cs) {
          const double s1 = (1 - A - d0) - 4 * (1 / (C * C) + e * e) * sd2;
          const double s2 = (A - d0) - 4 * (C * C + 1 / (e * e)) * sq2;
          const double mg = std::min(s1, s2);
          if (mg > best_margin || (mg == best_margin && dl < best_delta)) {
            have = true;
            best_margin = mg, best_delta = dl;
            cert.C0 = C, cert.eps0 = e, cert.A = A, cert.delta0 = d0;
          }
        }
      }
    }
  }
  cert.margin = have ? best_margin : -1;
  cert.feasible = have && best_margin > 0;
  cert.delta = have ? delta_from(cert.A, cert.delta0) : 1;
  return cert;
}

double delta_bound(const RcnCertificate& cert) {
  if (!cert.feasible) throw Error(ErrorCode::InfeasibleCertificate, "certificate is infeasible");
  return delta_from(cert.A, cert.delta0);
}

SweepReport uniform_delta_sweep(const RadialPotential&, const std::vector<RcnWindow>& windows,
                                double target_delta, SearchConfig cfg) {
  if (!(target_delta > 0 && target_delta < 1))
    throw Error(ErrorCode::OutOfRange, "target delta must lie in (0, 1)");
  SweepReport rep;
  rep.target_delta = target_delta;
  // (A - d0)/(A + d0) = delta with A + d0 = 1/2
  rep.A = 0.25 * (1 + target_delta);
  rep.delta0 = 0.25 * (1 - target_delta);
  cfg.pin_A = rep.A;
  cfg.pin_delta0 = rep.delta0;
  rep.windows = windows;
  rep.ok = !windows.empty();
  for (const auto& w : windows) {
    rep.certificates.push_back(certify_window(w, cfg));
    rep.ok = rep.ok && rep.certificates.back().feasible;
  }
  return rep;
}

json to_json(const RcnCertificate& c, bool with_samples) {
  json j;
  j["feasible"] = c.feasible;
  j["constants"] = {{"C0", c.C0}, {"eps0", c.eps0}, {"A", c.A}, {"delta0", c.delta0}};
  j["delta"] = c.delta;
  j["sup_dual"] = c.sup_dual;
  j["sup_qtau"] = c.sup_qtau;
  j["necessary_sup"] = c.necessary_sup;
  j["margin"] = c.margin;
  if (with_samples) {
    json s = json::array();
    for (const auto& x : c.samples)
      s.push_back({{"r", x.r}, {"tau", x.tau}, {"dual", x.dual}, {"qtau", x.qtau}});
    j["samples"] = s;
  }
  return j;
}

json to_json(const SweepReport& s) {
  json j;
  j["ok"] = s.ok;
  j["target_delta"] = s.target_delta;
  j["A"] = s.A;
  j["delta0"] = s.delta0;
  json ws = json::array();
  for (std::size_t i = 0; i < s.windows.size(); ++i) {
    const auto& c = s.certificates[i];
    ws.push_back({{"r_lo", s.windows[i].r_lo},
                  {"r_hi", s.windows[i].r_hi},
                  {"r_ref", s.windows[i].r_ref},
                  {"feasible", c.feasible},
                  {"margin", c.margin},
                  {"sup_dual", c.sup_dual},
                  {"sup_qtau", c.sup_qtau},
                  {"necessary_sup", c.necessary_sup},
                  {"C0", c.C0},
                  {"eps0", c.eps0}});
  }
  j["windows"] = ws;
  return j;
}

}  // namespace rcnwave

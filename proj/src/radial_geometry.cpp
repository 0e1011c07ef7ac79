#include "rcnwave/radial_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

// boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/roots.hpp>

#include "rcnwave/errors.hpp"
#include "rcnwave/io.hpp"

namespace rcnwave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct SampledTable {
  std::vector<double> r, q;
  boost::math::interpolators::pchip<std::vector<double>> spline;

  SampledTable(std::vector<double> rr, std::vector<double> qq)
      : r(rr), q(qq), spline(std::move(rr), std::move(qq)) {}

  double value(double x) const { return spline(x); }

  // 4th-order central difference of log q; one-sided near the ends.
  double dlog(double x) const {
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    std::size_t i = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
    i = std::min(i, r.size() - 2);
    const double h = 0.25 * (r[i + 1] - r[i]);
    const auto f = [&](double y) { return std::log(spline(y)); };
    if (x - 2 * h >= r.front() && x + 2 * h <= r.back())
      return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
    if (x - 2 * h < r.front())
      return (-25 * f(x) + 48 * f(x + h) - 36 * f(x + 2 * h) + 16 * f(x + 3 * h) -
              3 * f(x + 4 * h)) / (12 * h);
    return (25 * f(x) - 48 * f(x - h) + 36 * f(x - 2 * h) - 16 * f(x - 3 * h) +
            3 * f(x - 4 * h)) / (12 * h);
  }
};

const char* kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::minkowski: return "minkowski";
    case PotentialKind::power_singular: return "power_singular";
    case PotentialKind::log_singular: return "log_singular";
    case PotentialKind::power_infinity: return "power_infinity";
    case PotentialKind::schwarzschild: return "schwarzschild";
    case PotentialKind::reissner_nordstrom: return "reissner_nordstrom";
    case PotentialKind::de_sitter: return "de_sitter";
    case PotentialKind::coulomb: return "coulomb";
    case PotentialKind::spectrum_hydrogen: return "spectrum_hydrogen";
    case PotentialKind::custom_table: return "custom_table";
  }
  return "?";
}

PotentialKind kind_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(PotentialKind::custom_table); ++i) {
    const auto k = static_cast<PotentialKind>(i);
    if (s == kind_name(k)) return k;
  }
  throw Error(ErrorCode::Schema, "unknown potential kind '" + s + "'");
}

std::pair<double, double> rn_horizons(double m, double e) {
  const double d = m * m - e * e;
  if (d < 0) return {std::nan(""), std::nan("")};
  const double rp = m + std::sqrt(d);
  return {e * e / rp, rp};
}

namespace {

bool rn_extremal(double m, double e) {
  return std::abs(m * m - e * e) <= 1e-12 * std::max(m * m, e * e);
}

// r^2 - 2mr + e^2 in a cancellation-free factorised form.
double rn_delta(double m, double e, double r) {
  if (rn_extremal(m, e)) return (r - m) * (r - m);
  if (m * m > e * e) {
    const auto [rm, rp] = rn_horizons(m, e);
    return (r - rm) * (r - rp);
  }
  return (r - m) * (r - m) + (e * e - m * m);
}

}  // namespace

int rn_case_for(double m, double e, double r, bool horizon_anchor) {
  if (rn_extremal(m, e)) {
    if (r == m) throw Error(ErrorCode::OnHorizon, "r equals the degenerate horizon m");
    return r < m ? (horizon_anchor ? 5 : 4) : 6;
  }
  if (m * m > e * e) {
    const auto [rm, rp] = rn_horizons(m, e);
    if (r == rm || r == rp) throw Error(ErrorCode::OnHorizon, "r lies on a horizon");
    if (r < rm) return horizon_anchor ? 2 : 1;
    if (r > rp) return 3;
    throw Error(ErrorCode::OutOfBranch, "r between the horizons: q is negative there");
  }
  return 7;
}

double RadialPotential::q(double r) const {
  switch (kind) {
    case PotentialKind::minkowski: return c * c;
    case PotentialKind::power_singular: return beta * beta * std::pow(r, -2 * alpha);
    case PotentialKind::log_singular: return std::pow(-std::log(r), -delta) / (r * r);
    case PotentialKind::power_infinity: return beta * beta * std::pow(r, 2 * alpha);
    case PotentialKind::schwarzschild: return c * c * (r - 2 * m) / r;
    case PotentialKind::reissner_nordstrom: return rn_delta(m, e, r) / (r * r);
    case PotentialKind::de_sitter: return (1 - r / ell) * (1 + r / ell);
    case PotentialKind::coulomb: return 1 / r;
    case PotentialKind::spectrum_hydrogen: return 1 / (4.0 * level * level * r * r);
    case PotentialKind::custom_table: return table->value(r);
  }
  return 0;
}

double RadialPotential::dlogq(double r) const {
  switch (kind) {
    case PotentialKind::minkowski: return 0;
    case PotentialKind::power_singular: return -2 * alpha / r;
    case PotentialKind::log_singular: return (-2 + delta / (-std::log(r))) / r;
    case PotentialKind::power_infinity: return 2 * alpha / r;
    case PotentialKind::schwarzschild: return 2 * m / (r * (r - 2 * m));
    case PotentialKind::reissner_nordstrom:
      return (2 * r - 2 * m) / rn_delta(m, e, r) - 2 / r;
    case PotentialKind::de_sitter: return -2 * r / (ell * ell - r * r);
    case PotentialKind::coulomb: return -1 / r;
    case PotentialKind::spectrum_hydrogen: return -2 / r;
    case PotentialKind::custom_table: return table->dlog(r);
  }
  return 0;
}

double RadialPotential::g_rr(double r) const {
  switch (kind) {
    case PotentialKind::schwarzschild: return r / (r - 2 * m);
    case PotentialKind::reissner_nordstrom: return r * r / rn_delta(m, e, r);
    case PotentialKind::de_sitter: return 1 / q(r);
    default: return 1;
  }
}

double RadialPotential::tau_density(double r) const {
  switch (kind) {
    case PotentialKind::minkowski: return 1 / c;
    case PotentialKind::power_singular: return std::pow(r, alpha) / beta;
    case PotentialKind::log_singular:
      return r > 0 ? r * std::pow(-std::log(r), 0.5 * delta) : 0.0;
    case PotentialKind::power_infinity: return std::pow(r, -alpha) / beta;
    case PotentialKind::schwarzschild: return r / (c * (r - 2 * m));
    case PotentialKind::reissner_nordstrom: return r * r / rn_delta(m, e, r);
    case PotentialKind::de_sitter: return 1 / ((1 - r / ell) * (1 + r / ell));
    case PotentialKind::coulomb: return std::sqrt(r);
    case PotentialKind::spectrum_hydrogen: return 2.0 * level * r;
    case PotentialKind::custom_table: return 1 / std::sqrt(table->value(r));
  }
  return 0;
}

double RadialPotential::vminus(double r) const {
  if (v_minus) return v_minus(r);
  return v_minus_equals_q ? q(r) : 0.0;
}

double RadialPotential::vplus(double r) const { return v_plus ? v_plus(r) : 0.0; }

std::vector<double> RadialPotential::singular_points() const {
  switch (kind) {
    case PotentialKind::minkowski: return {};
    case PotentialKind::power_singular:
    case PotentialKind::power_infinity:
    case PotentialKind::coulomb:
    case PotentialKind::spectrum_hydrogen: return {0.0};
    case PotentialKind::log_singular: return {0.0, 1.0};
    case PotentialKind::schwarzschild: return {2 * m};
    case PotentialKind::reissner_nordstrom: {
      if (rn_extremal(m, e)) return {0.0, m};
      if (m * m > e * e) {
        const auto [rm, rp] = rn_horizons(m, e);
        return {0.0, rm, rp};
      }
      return {0.0};
    }
    case PotentialKind::de_sitter: return {ell};
    case PotentialKind::custom_table: return {};
  }
  return {};
}

bool RadialPotential::is_horizon(double r) const {
  return ((markers & horizon_at_inner) && r == r_min) ||
         ((markers & horizon_at_outer) && r == r_max);
}

bool RadialPotential::in_closure(double r) const {
  return std::isfinite(r) && r >= r_min && r <= r_max && !is_horizon(r);
}

bool RadialPotential::in_interior(double r) const {
  return std::isfinite(r) && r > r_min && r < r_max;
}

std::string RadialPotential::describe() const {
  std::ostringstream os;
  os << kind_name(kind) << "(n=" << dimension;
  switch (kind) {
    case PotentialKind::minkowski: os << ", c=" << c; break;
    case PotentialKind::power_singular:
    case PotentialKind::power_infinity: os << ", alpha=" << alpha << ", beta=" << beta; break;
    case PotentialKind::log_singular: os << ", delta=" << delta; break;
    case PotentialKind::schwarzschild: os << ", m=" << m << ", c=" << c; break;
    case PotentialKind::reissner_nordstrom:
      os << ", m=" << m << ", e=" << e << ", case=" << rn_case;
      break;
    case PotentialKind::de_sitter: os << ", ell=" << ell; break;
    case PotentialKind::spectrum_hydrogen: os << ", level=" << level; break;
    default: break;
  }
  os << ")";
  return os.str();
}

RadialPotential minkowski(int n, double c) {
  RadialPotential p;
  p.kind = PotentialKind::minkowski;
  p.dimension = n;
  p.c = c;
  p.r_min = 0;
  p.r_max = kInf;
  p.markers = unbounded_outer;
  return p;
}

RadialPotential power_singular(double alpha, double beta, int n) {
  RadialPotential p;
  p.kind = PotentialKind::power_singular;
  p.alpha = alpha;
  p.beta = beta;
  p.dimension = n;
  p.r_min = 0;
  p.r_max = kInf;
  p.markers = singularity_at_inner | unbounded_outer;
  return p;
}

RadialPotential log_singular(double delta, int n, double r_max) {
  RadialPotential p;
  p.kind = PotentialKind::log_singular;
  p.delta = delta;
  p.dimension = n;
  p.r_min = 0;
  p.r_max = std::min(r_max, 1.0);
  p.markers = singularity_at_inner;
  return p;
}

RadialPotential power_infinity(double alpha, double beta, int n) {
  RadialPotential p;
  p.kind = PotentialKind::power_infinity;
  p.alpha = alpha;
  p.beta = beta;
  p.dimension = n;
  p.r_min = 0;
  p.r_max = kInf;
  p.markers = unbounded_outer;
  return p;
}

RadialPotential schwarzschild(double m, double c) {
  RadialPotential p;
  p.kind = PotentialKind::schwarzschild;
  p.m = m;
  p.c = c;
  p.dimension = 3;
  p.r_min = 2 * m;
  p.r_max = kInf;
  p.markers = horizon_at_inner | unbounded_outer;
  return p;
}

RadialPotential reissner_nordstrom(double m, double e, int rn_case) {
  RadialPotential p;
  p.kind = PotentialKind::reissner_nordstrom;
  p.m = m;
  p.e = e;
  p.dimension = 3;
  p.rn_case = rn_case;
  const bool ext = rn_extremal(m, e);
  const auto [rm, rp] = rn_horizons(m, e);
  auto need = [&](bool ok) {
    if (!ok) throw Error(ErrorCode::OutOfBranch, "case incompatible with m, e");
  };
  switch (rn_case) {
    case 1:
    case 2:
      need(!ext && m * m > e * e);
      p.r_min = 0, p.r_max = rm, p.markers = singularity_at_inner | horizon_at_outer;
      break;
    case 3:
      need(!ext && m * m > e * e);
      p.r_min = rp, p.r_max = kInf, p.markers = horizon_at_inner | unbounded_outer;
      break;
    case 4:
    case 5:
      need(ext);
      p.r_min = 0, p.r_max = m, p.markers = singularity_at_inner | horizon_at_outer;
      break;
    case 6:
      need(ext);
      p.r_min = m, p.r_max = kInf, p.markers = horizon_at_inner | unbounded_outer;
      break;
    case 7:
      need(!ext && m * m < e * e);
      p.r_min = 0, p.r_max = kInf, p.markers = singularity_at_inner | unbounded_outer;
      break;
    default: throw Error(ErrorCode::OutOfBranch, "case must be 1..7");
  }
  return p;
}

RadialPotential de_sitter(double ell) {
  RadialPotential p;
  p.kind = PotentialKind::de_sitter;
  p.ell = ell;
  p.dimension = 3;
  p.r_min = 0;
  p.r_max = ell;
  p.markers = horizon_at_outer;
  return p;
}

RadialPotential coulomb(int n) {
  RadialPotential p;
  p.kind = PotentialKind::coulomb;
  p.dimension = n;
  p.r_min = 0;
  p.r_max = kInf;
  p.markers = singularity_at_inner | unbounded_outer;
  return p;
}

RadialPotential spectrum_hydrogen(int level, int n) {
  RadialPotential p;
  p.kind = PotentialKind::spectrum_hydrogen;
  p.level = level;
  p.dimension = n;
  p.r_min = 0;
  p.r_max = kInf;
  p.markers = singularity_at_inner | unbounded_outer;
  return p;
}

RadialPotential custom_table(std::vector<double> r, std::vector<double> q, int n) {
  if (r.size() != q.size() || r.size() < 4)
    throw Error(ErrorCode::Schema, "custom table needs >= 4 matching (r, q) samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(q[i] > 0) || !std::isfinite(q[i]))
      throw Error(ErrorCode::Schema, "custom table samples must be strictly positive");
    if (i && !(r[i] > r[i - 1]))
      throw Error(ErrorCode::Schema, "custom table radii must be strictly increasing");
  }
  RadialPotential p;
  p.kind = PotentialKind::custom_table;
  p.dimension = n;
  p.r_min = r.front();
  p.r_max = r.back();
  p.table = std::make_shared<SampledTable>(std::move(r), std::move(q));
  return p;
}

std::optional<std::string> closed_form_tag(const RadialPotential& p) {
  switch (p.kind) {
    case PotentialKind::minkowski: return "r/c";
    case PotentialKind::power_singular: return "r^(alpha+1)/(beta(alpha+1))";
    case PotentialKind::power_infinity:
      return p.alpha == 1 ? "log(r)/beta" : "r^(1-alpha)/(beta(1-alpha))";
    case PotentialKind::schwarzschild: return "((r-2m) + 2m log(r-2m))/c";
    case PotentialKind::reissner_nordstrom:
      return "rn_case_" + std::to_string(p.rn_case);
    case PotentialKind::de_sitter: return "(ell/2) log((1+r/ell)/(1-r/ell))";
    case PotentialKind::coulomb: return "(2/3) r^(3/2)";
    case PotentialKind::spectrum_hydrogen: return "level r^2";
    default: return std::nullopt;
  }
}

namespace {

double rn_closed(double m, double e, int cs, double r) {
  const bool ext = rn_extremal(m, e);
  auto bad = [] { throw Error(ErrorCode::OutOfBranch, "r outside the branch region"); };
  if (cs >= 1 && cs <= 3) {
    if (ext || m * m < e * e) bad();
    const auto [rm, rp] = rn_horizons(m, e);
    const double A = rp * rp / (rp - rm), B = rm * rm / (rp - rm);
    switch (cs) {
      case 1:
        if (!(r >= 0 && r < rm)) bad();
        return r + A * std::log1p(-r / rp) - B * std::log1p(-r / rm);
      case 2:
        if (!(r > 0 && r < rm)) bad();
        return r + A * std::log(rp - r) - B * std::log(rm - r);
      default:
        if (!(r > rp)) bad();
        return r + A * std::log(r - rp) - B * std::log(r - rm);
    }
  }
  if (cs >= 4 && cs <= 6) {
    if (!ext) bad();
    switch (cs) {
      case 4:
        if (!(r >= 0 && r < m)) bad();
        return r + 2 * m * std::log1p(-r / m) + m * r / (m - r);
      case 5:
        if (!(r > 0 && r < m)) bad();
        return r + m * std::log((r - m) * (r - m)) + m * m / (m - r);
      default:
        if (!(r > m)) bad();
        return r + m * std::log((r - m) * (r - m)) - m * m / (r - m);
    }
  }
  if (cs == 7) {
    if (ext || m * m > e * e) bad();
    if (!(r >= 0)) bad();
    const double k = std::sqrt(e * e - m * m), c = (2 * m * m - e * e) / k;
    // near r = 0 the three terms cancel to O(r^3): use log1p and the arctan sum formula
    if (r * m < e * e)
      return r + m * std::log1p(r * (r - 2 * m) / (e * e)) + c * std::atan(r * k / (e * e - m * r));
    return r + m * std::log(((r - m) * (r - m) + k * k) / (e * e)) +
           c * (std::atan(m / k) + std::atan((r - m) / k));
  }
  bad();
  return 0;
}

}  // namespace

std::optional<double> closed_form_tau(const RadialPotential& p, double r) {
  switch (p.kind) {
    case PotentialKind::minkowski: return r / p.c;
    case PotentialKind::power_singular:
      return std::pow(r, p.alpha + 1) / (p.beta * (p.alpha + 1));
    case PotentialKind::power_infinity:
      if (p.alpha == 1) return std::log(r) / p.beta;
      return std::pow(r, 1 - p.alpha) / (p.beta * (1 - p.alpha));
    case PotentialKind::schwarzschild: {
      const double x = r - 2 * p.m;
      if (!(x > 0)) throw Error(ErrorCode::OutOfDomain, "r must exceed 2m");
      return (x + 2 * p.m * std::log(x)) / p.c;
    }
    case PotentialKind::reissner_nordstrom: {
      const int cs = p.rn_case ? p.rn_case : rn_case_for(p.m, p.e, r);
      return rn_closed(p.m, p.e, cs, r);
    }
    case PotentialKind::de_sitter: return p.ell * std::atanh(r / p.ell);
    case PotentialKind::coulomb: return 2.0 / 3.0 * std::pow(r, 1.5);
    case PotentialKind::spectrum_hydrogen: return p.level * r * r;
    default: return std::nullopt;
  }
}

double tau_of_r(const RadialPotential& p, double r_ref, double r, double rel_tol) {
  if (!p.in_closure(r) || !p.in_closure(r_ref)) {
    std::ostringstream os;
    os << "r=" << r << ", r_ref=" << r_ref << " not in the domain of " << p.describe();
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  if (r == r_ref) return 0.0;
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.singular_points = p.singular_points();
  const Fn f = [&p](double x) { return p.tau_density(x); };
  return integrate(f, r_ref, r, opt);
}

InnerTimeChart make_chart(const RadialPotential& p, double r_ref, double r_lo, double r_hi,
                          int uniform_samples) {
  if (!(r_lo < r_hi) || !p.in_closure(r_lo) || !p.in_closure(r_hi))
    throw Error(ErrorCode::OutOfDomain, "chart window outside the domain");
  std::vector<double> nodes;
  const int n = std::max(uniform_samples, 8);
  for (int i = 0; i <= n; ++i) nodes.push_back(r_lo + (r_hi - r_lo) * i / n);
  const double L = r_hi - r_lo;
  for (double s : p.singular_points()) {
    // Geometric clustering toward an end that sits close to a singular radius.
    if (s <= r_lo && r_lo - s < L) {
      const double stop = std::max(r_lo - s, 1e-300);
      for (int k = 1; k < 1100; ++k) {
        const double off = std::ldexp(L, -k);
        if (off < 0.5 * stop * 1e-3 || r_lo + off == r_lo) break;
        nodes.push_back(r_lo + off);
      }
    }
    if (s >= r_hi && s - r_hi < L) {
      const double stop = std::max(s - r_hi, 1e-300);
      for (int k = 1; k < 1100; ++k) {
        const double off = std::ldexp(L, -k);
        if (off < 0.5 * stop * 1e-3 || r_hi - off == r_hi) break;
        nodes.push_back(r_hi - off);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  InnerTimeChart ch;
  ch.potential = p;
  ch.r_ref = r_ref;
  ch.closed_form = closed_form_tag(p);
  ch.r = nodes;
  ch.tau.resize(nodes.size());
  QuadOptions opt;
  opt.singular_points = p.singular_points();
  const Fn f = [&p](double x) { return p.tau_density(x); };
  ch.tau[0] = tau_of_r(p, r_ref, nodes[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    ch.tau[i] = ch.tau[i - 1] + integrate(f, nodes[i - 1], nodes[i], opt);
  return ch;
}

double chart_tau(const InnerTimeChart& ch, double r) {
  if (!(r >= ch.r.front() && r <= ch.r.back()))
    throw Error(ErrorCode::OutOfRange, "radius outside the chart window");
  auto it = std::upper_bound(ch.r.begin(), ch.r.end(), r);
  std::size_t i = it == ch.r.begin() ? 0 : static_cast<std::size_t>(it - ch.r.begin()) - 1;
  if (i + 1 == ch.r.size()) return ch.tau.back();
  QuadOptions opt;
  opt.singular_points = ch.potential.singular_points();
  const auto& p = ch.potential;
  const Fn f = [&p](double x) { return p.tau_density(x); };
  return ch.tau[i] + integrate(f, ch.r[i], r, opt);
}

double r_of_tau(const InnerTimeChart& ch, double tau) {
  const double slack = 1e-12 * std::max(1.0, std::abs(tau));
  if (!(tau >= ch.tau.front() - slack && tau <= ch.tau.back() + slack))
    throw Error(ErrorCode::OutOfRange, "tau outside the chart range");
  if (tau <= ch.tau.front()) return ch.r.front();
  if (tau >= ch.tau.back()) return ch.r.back();
  auto it = std::upper_bound(ch.tau.begin(), ch.tau.end(), tau);
  const std::size_t i = static_cast<std::size_t>(it - ch.tau.begin()) - 1;
  if (ch.tau[i] == tau) return ch.r[i];
  QuadOptions opt;
  opt.singular_points = ch.potential.singular_points();
  const auto& p = ch.potential;
  const Fn f = [&p](double x) { return p.tau_density(x); };
  const double r0 = ch.r[i], t0 = ch.tau[i];
  const auto g = [&](double x) { return t0 + integrate(f, r0, x, opt) - tau; };
  double a = ch.r[i], b = ch.r[i + 1];
  double ga = ch.tau[i] - tau, gb = ch.tau[i + 1] - tau;
  std::uintmax_t iters = 200;
  const auto res = boost::math::tools::toms748_solve(
      g, a, b, ga, gb, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (res.first + res.second);
}

GeometryProfile geometry_profile(const RadialPotential& p, double r_ref, double r) {
  if (!p.in_interior(r)) throw Error(ErrorCode::OutOfDomain, "r not in the domain interior");
  GeometryProfile g;
  g.q = p.q(r);
  g.sigma = std::pow(r, 0.5 * (p.dimension - 1));
  g.tau = tau_of_r(p, r_ref, r);
  g.w = std::pow(g.q, 0.75) * g.sigma * std::abs(g.tau);
  return g;
}

double dual_from_tau(const RadialPotential& p, double r, double tau) {
  const double q = p.q(r);
  if (tau == 0 || !(q > 0) || r == 0) throw Error(ErrorCode::ZeroW, "w vanishes at this radius");
  const double k = (0.75 * p.dlogq(r) + 0.5 * (p.dimension - 1) / r) / p.tau_density(r);
  return std::abs(1 + tau * k);
}

double dual_potential(const RadialPotential& p, double r_ref, double r) {
  if (!p.in_interior(r)) throw Error(ErrorCode::OutOfDomain, "r not in the domain interior");
  return dual_from_tau(p, r, tau_of_r(p, r_ref, r));
}

CompletenessReport completeness_report(const RadialPotential& p, DomainEnd end,
                                       double threshold, int max_levels) {
  CompletenessReport rep;
  rep.endpoint = end;
  QuadOptions opt;
  opt.singular_points = p.singular_points();
  const Fn f = [&p](double x) { return p.tau_density(x); };
  double a, prev;
  std::vector<double> cuts;
  if (end == DomainEnd::inner) {
    const double e = p.r_min;
    a = std::isfinite(p.r_max) ? 0.5 * (e + p.r_max) : e + 1;
    for (int k = 1; k <= max_levels; ++k) {
      const double rk = e + (a - e) * std::ldexp(1.0, -k);
      if (rk == e) break;
      cuts.push_back(rk);
    }
  } else if (std::isfinite(p.r_max)) {
    const double e = p.r_max;
    a = 0.5 * (p.r_min + e);
    for (int k = 1; k <= max_levels; ++k) {
      const double rk = e - (e - a) * std::ldexp(1.0, -k);
      if (rk == e) break;
      cuts.push_back(rk);
    }
  } else {
    a = std::max(p.r_min, 0.0) + 1;
    for (int k = 1; k <= max_levels; ++k) cuts.push_back(a * std::ldexp(1.0, k));
  }
  rep.anchor = a;
  prev = a;
  double tau = 0, last_inc = 0;
  for (double rk : cuts) {
    last_inc = std::abs(integrate(f, prev, rk, opt));
    tau += last_inc;
    prev = rk;
    rep.trace.emplace_back(rk, tau);
    if (tau > threshold) break;
  }
  rep.diverges = tau > threshold || last_inc > 1e-6 * std::max(1.0, tau);
  return rep;
}

void write_chart_csv(const InnerTimeChart& chart, std::ostream& os) {
  os << "r,tau\n";
  for (std::size_t i = 0; i < chart.r.size(); ++i) write_csv_row(os, {chart.r[i], chart.tau[i]});
}

}  // namespace rcnwave

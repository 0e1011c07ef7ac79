#include "rcnwave/quadratic_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rcnwave/errors.hpp"

namespace rcnwave {

namespace {
constexpr double kGaussSharp = 4.0;
}

const char* shape_name(ProfileShape s) {
  switch (s) {
    case ProfileShape::polynomial_bump: return "polynomial_bump";
    case ProfileShape::gaussian_bump: return "gaussian_bump";
    case ProfileShape::piecewise_linear: return "piecewise_linear";
  }
  return "?";
}

ProfileShape shape_from_name(const std::string& s) {
  if (s == "polynomial_bump") return ProfileShape::polynomial_bump;
  if (s == "gaussian_bump") return ProfileShape::gaussian_bump;
  if (s == "piecewise_linear") return ProfileShape::piecewise_linear;
  throw Error(ErrorCode::Schema, "unknown profile shape '" + s + "'");
}

double TestProfile::center() const {
  return coordinate == ProfileCoord::radius ? 0.5 * (a + b) : std::sqrt(a * b);
}

double TestProfile::width() const {
  return coordinate == ProfileCoord::radius ? 0.5 * (b - a) : 0.5 * std::log(b / a);
}

namespace {

// z in [-1, 1] and dz/dr
std::pair<double, double> zcoord(const TestProfile& f, double r) {
  if (f.coordinate == ProfileCoord::radius)
    return {(2 * r - f.a - f.b) / (f.b - f.a), 2 / (f.b - f.a)};
  const double la = std::log(f.a), lb = std::log(f.b);
  return {(2 * std::log(r) - la - lb) / (lb - la), 2 / (r * (lb - la))};
}

double chi(const TestProfile& f, double z) {
  if (std::abs(z) >= 1) return 0;
  switch (f.shape) {
    case ProfileShape::polynomial_bump: return std::pow(1 - z * z, f.order);
    case ProfileShape::gaussian_bump:
      return std::exp(-kGaussSharp * z * z) - std::exp(-kGaussSharp);
    case ProfileShape::piecewise_linear: return 1 - std::abs(z);
  }
  return 0;
}

double chi_z(const TestProfile& f, double z) {
  if (std::abs(z) >= 1) return 0;
  switch (f.shape) {
    case ProfileShape::polynomial_bump:
      return -2.0 * f.order * z * std::pow(1 - z * z, f.order - 1);
    case ProfileShape::gaussian_bump: return -2 * kGaussSharp * z * std::exp(-kGaussSharp * z * z);
    case ProfileShape::piecewise_linear: return z > 0 ? -1.0 : (z < 0 ? 1.0 : 0.0);
  }
  return 0;
}

}  // namespace

double TestProfile::value(double r) const {
  if (!(r > a && r < b)) return 0;
  const double w = power == 0 ? 1.0 : std::pow(r, power);
  return amplitude * w * chi(*this, zcoord(*this, r).first);
}

double TestProfile::deriv(double r) const {
  if (!(r > a && r < b)) return 0;
  const auto [z, dz] = zcoord(*this, r);
  const double w = power == 0 ? 1.0 : std::pow(r, power);
  const double dw = power == 0 ? 0.0 : power * std::pow(r, power - 1);
  return amplitude * (dw * chi(*this, z) + w * chi_z(*this, z) * dz);
}

TestProfile bump(double a, double b, double amplitude, int order) {
  if (!(a < b)) throw Error(ErrorCode::SupportOutsideWindow, "empty bump support");
  TestProfile f;
  f.a = a, f.b = b, f.amplitude = amplitude, f.order = order;
  return f;
}

TestProfile bump_at(double center, double half_width, double amplitude, int order) {
  return bump(center - half_width, center + half_width, amplitude, order);
}

TestProfile log_bump(double a, double b, double power, int order) {
  if (!(a > 0 && a < b)) throw Error(ErrorCode::SupportOutsideWindow, "bad log-bump support");
  TestProfile f;
  f.a = a, f.b = b, f.power = power, f.order = order;
  f.coordinate = ProfileCoord::log_radius;
  return f;
}

double profile_integral(const TestProfile& f, const Fn& g, int panels) {
  if (f.coordinate == ProfileCoord::radius) return composite_converged(g, f.a, f.b, panels);
  const Fn h = [&g](double s) {
    const double r = std::exp(s);
    return g(r) * r;
  };
  return composite_converged(h, std::log(f.a), std::log(f.b), panels);
}

json to_json(const TestProfile& f) {
  return {{"shape", shape_name(f.shape)},
          {"support", {f.a, f.b}},
          {"coordinate", f.coordinate == ProfileCoord::radius ? "r" : "log_r"},
          {"center", f.center()},
          {"width", f.width()},
          {"amplitude", f.amplitude},
          {"power", f.power},
          {"order", f.order}};
}

HardyResult hardy_check(const HardyProfile& f0, double tau0) {
  HardyProfile f = f0;
  // pull leading zero coefficients into the power
  while (f.h.size() > 1 && f.h.front() == 0) {
    f.h.erase(f.h.begin());
    f.s += 1;
  }
  HardyResult res;
  if (f.h.empty() || (f.h.size() == 1 && f.h[0] == 0)) {
    res.holds = true;
    return res;
  }
  if (f.s <= 0) throw Error(ErrorCode::ProfileViolatesZeroAtOrigin, "f(0) != 0");
  if (f.s <= 0.5)
    throw Error(ErrorCode::NonIntegrableAtEndpoint, "f^2/tau^2 is not integrable at 0");

  const auto h = [&](double t) {
    double v = 0;
    for (std::size_t k = f.h.size(); k-- > 0;) v = v * t + f.h[k];
    return v;
  };
  const auto th = [&](double t) {  // tau h'(tau)
    double v = 0;
    for (std::size_t k = f.h.size(); k-- > 1;) v = v * t + k * f.h[k];
    return v * t;
  };
  const auto Hl = [&](double t) { return h(t) * h(t); };
  const auto Hr = [&](double t) {
    const double d = f.s * h(t) + th(t);
    return 4 * d * d;
  };
  const double s = f.s;
  if (s >= 1) {
    const Fn gl = [&](double t) { return t == 0 ? 0.0 : std::pow(t, 2 * s - 2) * Hl(t); };
    const Fn gr = [&](double t) { return t == 0 ? 0.0 : std::pow(t, 2 * s - 2) * Hr(t); };
    const Fn gl1 = [&](double t) { return Hl(t); };
    const Fn gr1 = [&](double t) { return Hr(t); };
    res.lhs = composite_converged(s == 1 ? gl1 : gl, 0, tau0);
    res.rhs = composite_converged(s == 1 ? gr1 : gr, 0, tau0);
  } else {
    // tau = tau0 t^g with g = 1/(2s-1) turns tau^(2s-2) dtau into a constant
    const double g = 1 / (2 * s - 1);
    const double pre = std::pow(tau0, 2 * s - 1) * g;
    const Fn gl = [&](double t) { return Hl(tau0 * std::pow(t, g)); };
    const Fn gr = [&](double t) { return Hr(tau0 * std::pow(t, g)); };
    res.lhs = pre * composite_converged(gl, 0, 1);
    res.rhs = pre * composite_converged(gr, 0, 1);
  }
  res.holds = res.lhs <= res.rhs + 1e-10;
  return res;
}

namespace {

struct FormParts {
  double grad = 0, q = 0;
};

FormParts form_parts(const RadialPotential& p, const TestProfile& phi, int panels = 2048) {
  const int n = p.dimension;
  const auto dmu = [&](double r) { return std::pow(r, n - 1) * std::sqrt(p.g_rr(r)); };
  const Fn g = [&](double r) {
    const double d = phi.deriv(r);
    return d * d / p.g_rr(r) * dmu(r);
  };
  const Fn qq = [&](double r) {
    const double v = phi.value(r);
    return p.q(r) * v * v * dmu(r);
  };
  return {profile_integral(phi, g, panels), profile_integral(phi, qq, panels)};
}

void require_inside(const RadialPotential& p, const TestProfile& phi, double lo, double hi) {
  if (!(phi.a >= lo && phi.b <= hi && phi.a > p.r_min && phi.b < p.r_max && phi.a < phi.b))
    throw Error(ErrorCode::SupportOutsideWindow, "profile support leaves the window");
}

}  // namespace

FormResult positivity_check(const RadialPotential& p, const TestProfile& phi, const RcnWindow& w,
                            double delta) {
  require_inside(p, phi, w.r_lo, w.r_hi);
  const auto parts = form_parts(p, phi);
  FormResult r;
  r.lhs = parts.q;
  r.rhs = parts.grad;
  r.holds = r.lhs <= delta * r.rhs * (1 + 1e-8);
  return r;
}

std::vector<TestProfile> random_bump_family(const RcnWindow& w, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double L = w.r_hi - w.r_lo;
  std::vector<TestProfile> out;
  for (int i = 0; i < count; ++i) {
    const double a = w.r_lo + L * (0.02 + 0.6 * U(rng));
    const double b = a + (w.r_hi - a) * (0.1 + 0.85 * U(rng));
    TestProfile f = bump(a, b, 0.5 + U(rng), 2 + static_cast<int>(3 * U(rng)));
    f.shape = static_cast<ProfileShape>(i % 3);
    out.push_back(f);
  }
  return out;
}

json to_json(const FalsificationReport& r) {
  json j;
  j["condition"] = r.condition;
  j["parameters"] = r.parameters;
  j["found"] = r.found;
  j["trials"] = r.trials;
  j["witness_profile"] = r.found ? to_json(r.witness) : json(nullptr);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  return j;
}

namespace {

FalsificationReport log_bump_search(const RadialPotential& p, double delta, double r_lo,
                                    double r_hi, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  FalsificationReport rep;
  const double p0 = 0.5 * (2 - p.dimension);  // extremal power for the radial Hardy bound
  double best = -1;
  for (int t = 0; t < trials; ++t) {
    rep.trials = t + 1;
    const double logw = 1 + 39 * U(rng);
    const double b = r_hi * std::exp(-2 * U(rng));
    const double a = std::max(b * std::exp(-logw), std::nextafter(r_lo, r_hi));
    if (!(a < b)) continue;
    TestProfile f = log_bump(a, b, p0 + 0.1 * (U(rng) - 0.5), 2 + static_cast<int>(3 * U(rng)));
    const auto parts = form_parts(p, f, 128);
    const double ratio = parts.q / (delta * parts.grad);
    if (ratio > best) {
      best = ratio;
      rep.witness = f;
      rep.lhs = parts.q;
      rep.rhs = delta * parts.grad;
    }
    if (parts.q > delta * parts.grad * (1 + 1e-8)) {
      rep.found = true;
      return rep;
    }
  }
  return rep;
}

}  // namespace

FalsificationReport positivity_falsify(const RadialPotential& p, double delta, double r_lo,
                                       double r_hi, int trials, std::uint64_t seed) {
  auto rep = log_bump_search(p, delta, r_lo, r_hi, trials, seed);
  rep.condition = "int q phi^2 dmu <= delta int |grad phi|^2 dmu";
  rep.parameters = {{"potential", p.describe()}, {"delta", delta}, {"window", {r_lo, r_hi}},
                    {"seed", seed}};
  return rep;
}

FalsificationReport nonnegativity_falsify(int n, double beta2, int trials, std::uint64_t seed) {
  const auto p = power_singular(1, std::sqrt(beta2), n);
  auto rep = log_bump_search(p, 1.0, 0, 1, trials, seed);
  rep.condition = "int |grad phi|^2 dmu - int beta^2 r^-2 phi^2 dmu >= 0";
  rep.parameters = {{"dimension", n}, {"beta2", beta2},
                    {"threshold", 0.25 * (n - 2) * (n - 2)}, {"seed", seed}};
  return rep;
}

double CutoffFamily::raw(std::size_t k, double t) const {
  const double d = std::abs(t - centers[k]);
  const double in = radii[k] - overlap, out = radii[k] - 0.5 * overlap;
  if (d <= in) return 1;
  if (d >= out) return 0;
  return (out - d) / (0.5 * overlap);
}

double CutoffFamily::raw_deriv(std::size_t k, double t) const {
  const double d = std::abs(t - centers[k]);
  const double in = radii[k] - overlap, out = radii[k] - 0.5 * overlap;
  if (d <= in || d >= out) return 0;
  return (t >= centers[k] ? -1.0 : 1.0) * 2 / overlap;
}

double CutoffFamily::sum_sq(double t) const {
  double s = 0;
  for (std::size_t k = 0; k < size(); ++k) s += raw(k, t) * raw(k, t);
  if (!renormalize) return s;
  return s > 0 ? 1.0 : 0.0;
}

double CutoffFamily::J(std::size_t k, double t) const {
  if (!renormalize) return raw(k, t);
  double s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += raw(i, t) * raw(i, t);
  return s > 0 ? raw(k, t) / std::sqrt(s) : 0.0;
}

double CutoffFamily::J_deriv(std::size_t k, double t) const {
  if (!renormalize) return raw_deriv(k, t);
  double s = 0, sd = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    s += raw(i, t) * raw(i, t);
    sd += raw(i, t) * raw_deriv(i, t);
  }
  if (s <= 0) return 0;
  return raw_deriv(k, t) / std::sqrt(s) - raw(k, t) * sd / std::pow(s, 1.5);
}

double CutoffFamily::grad_sq(double t) const {
  double g = 0;
  for (std::size_t k = 0; k < size(); ++k) g += J_deriv(k, t) * J_deriv(k, t);
  return g;
}

double CutoffFamily::support_lo() const {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k)
    lo = std::min(lo, centers[k] - radii[k] + 0.5 * overlap);
  return lo;
}

double CutoffFamily::support_hi() const {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k)
    hi = std::max(hi, centers[k] + radii[k] - 0.5 * overlap);
  return hi;
}

std::vector<double> CutoffFamily::breakpoints() const {
  std::vector<double> b;
  for (std::size_t k = 0; k < size(); ++k) {
    for (double off : {radii[k] - overlap, radii[k] - 0.5 * overlap}) {
      b.push_back(centers[k] - off);
      b.push_back(centers[k] + off);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

ImsResult ims_error(const CutoffFamily& fam, int samples) {
  ImsResult res;
  if (fam.size() == 0) return res;
  std::vector<double> ts;
  const double lo = fam.support_lo(), hi = fam.support_hi();
  for (int i = 0; i < samples; ++i) ts.push_back(lo + (hi - lo) * i / (samples - 1.0));
  for (double b : fam.breakpoints()) ts.push_back(b);
  ts.push_back(fam.region_lo);
  ts.push_back(fam.region_hi);
  for (double t : ts) {
    if (t >= fam.region_lo && t <= fam.region_hi) {
      double s = 0;
      for (std::size_t k = 0; k < fam.size(); ++k) s += fam.J(k, t) * fam.J(k, t);
      res.max_coverage_dev = std::max(res.max_coverage_dev, std::abs(s - 1));
    }
    const double g = fam.grad_sq(t);
    if (g > res.sup) res.sup = g, res.arg = t;
  }
  if (res.max_coverage_dev > 1e-9)
    throw Error(ErrorCode::CoverageGap, "sum of squared cutoffs deviates from 1 on the region");
  return res;
}

ImsIdentity ims_identity(const CutoffFamily& fam, const TestProfile& phi) {
  if (!(phi.a >= fam.region_lo && phi.b <= fam.region_hi))
    throw Error(ErrorCode::CoverageGap, "profile support not covered by the family");
  std::vector<double> cuts{phi.a, phi.b};
  for (double b : fam.breakpoints())
    if (b > phi.a && b < phi.b) cuts.push_back(b);
  if (phi.shape == ProfileShape::piecewise_linear) cuts.push_back(phi.center());
  std::sort(cuts.begin(), cuts.end());
  const Fn dphi2 = [&](double t) { return phi.deriv(t) * phi.deriv(t); };
  const Fn err = [&](double t) { return fam.grad_sq(t) * phi.value(t) * phi.value(t); };
  ImsIdentity out;
  double local = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = cuts[i], x1 = cuts[i + 1];
    out.lhs += composite_converged(dphi2, x0, x1, 64, 1e-12);
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const Fn jp = [&](double t) {
        const double d = fam.J_deriv(k, t) * phi.value(t) + fam.J(k, t) * phi.deriv(t);
        return d * d;
      };
      local += composite_converged(jp, x0, x1, 64, 1e-12);
    }
    local -= composite_converged(err, x0, x1, 64, 1e-12);
  }
  out.rhs = local;
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
  return out;
}

MinorantResult minorant_form_check(const RadialPotential& p, double delta_t,
                                   const TestProfile& phi) {
  require_inside(p, phi, p.r_min, p.r_max);
  const auto parts = form_parts(p, phi);
  const int n = p.dimension;
  const Fn vm = [&](double r) {
    const double v = phi.value(r);
    return p.vminus(r) * v * v * std::pow(r, n - 1) * std::sqrt(p.g_rr(r));
  };
  MinorantResult res;
  res.gradient = parts.grad;
  res.minorant = parts.q;
  res.vminus = p.v_minus || p.v_minus_equals_q ? profile_integral(phi, vm) : 0.0;
  const double lhs = delta_t * res.gradient + res.minorant;
  res.holds = lhs >= res.vminus - 1e-12 * (std::abs(lhs) + std::abs(res.vminus));
  return res;
}

SelfAdjointness self_adjointness_feasible(int n, double alpha) {
  SelfAdjointness s;
  const double c = 0.5 * (n - 2);
  if (c > 0) {
    s.beta_witness = c;
    s.min_value = 1 + alpha - c * c;
  } else {
    s.beta_witness = 0;
    s.min_value = 1 + alpha;  // infimum as beta -> 0+
  }
  s.feasible = c > 0 && alpha <= c * c - 1;  // exact at the boundary, unlike min_value
  if (!s.feasible) s.beta_witness = 0;
  return s;
}

}  // namespace rcnwave

#include "rcnwave/wave_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/roots.hpp>

#include "rcnwave/errors.hpp"

namespace rcnwave {

Dynamics default_dynamics(const RadialPotential& p) {
  switch (p.kind) {
    case PotentialKind::schwarzschild:
    case PotentialKind::reissner_nordstrom:
    case PotentialKind::de_sitter: return Dynamics::lorentzian;
    default: return Dynamics::schrodinger;
  }
}

const char* dynamics_name(Dynamics d) {
  return d == Dynamics::schrodinger ? "schrodinger" : "lorentzian";
}

Dynamics dynamics_from_name(const std::string& s) {
  if (s == "schrodinger") return Dynamics::schrodinger;
  if (s == "lorentzian") return Dynamics::lorentzian;
  throw Error(ErrorCode::Schema, "unknown dynamics '" + s + "'");
}

namespace {

struct RQ {
  double r, q;
};

// radius where the signed tau (from anchor) equals t
double r_at_tau(const RadialPotential& p, double anchor, double t) {
  if (t == 0) return anchor;
  const bool up = t > 0;
  double prev_r = anchor, prev_tau = 0;
  for (int k = 1; k < 2100; ++k) {
    double cand;
    if (up) {
      cand = std::isfinite(p.r_max) ? p.r_max - (p.r_max - anchor) * std::ldexp(1.0, -k)
                                    : anchor + (std::ldexp(1.0, k) - 1) * std::max(anchor, 1.0);
      if (cand >= p.r_max || !std::isfinite(cand)) break;
    } else {
      cand = p.r_min + (anchor - p.r_min) * std::ldexp(1.0, -k);
      if (cand <= p.r_min) {
        if (!p.in_closure(p.r_min)) break;
        cand = p.r_min;
      }
    }
    const double tc = prev_tau + tau_of_r(p, prev_r, cand);
    if (up ? tc >= t : tc <= t) {
      const double r0 = prev_r, t0 = prev_tau;
      const auto g = [&](double r) { return t0 + tau_of_r(p, r0, r) - t; };
      double a = std::min(r0, cand), b = std::max(r0, cand);
      std::uintmax_t it = 200;
      const auto res = boost::math::tools::toms748_solve(
          g, a, b, boost::math::tools::eps_tolerance<double>(52), it);
      return 0.5 * (res.first + res.second);
    }
    if (cand == p.r_min) break;
    prev_r = cand;
    prev_tau = tc;
  }
  throw Error(ErrorCode::OutOfRange, "tau beyond the representable range of the domain");
}

// w with w + log w = z
double wlog_solve(double z) {
  if (z < 700) return boost::math::lambert_w0(std::exp(z));
  double w = z - std::log(z);
  for (int i = 0; i < 50; ++i) {
    const double dw = (w + std::log(w) - z) / (1 + 1 / w);
    w -= dw;
    if (std::abs(dw) <= 1e-16 * w) break;
  }
  return w;
}

class TauMap {
 public:
  TauMap(const RadialPotential& p, double anchor, int dir, double x_lo, double x_hi)
      : p_(p), anchor_(anchor), dir_(dir) {
    if (p.kind == PotentialKind::schwarzschild || p.kind == PotentialKind::de_sitter) {
      base_ = *closed_form_tau(p, anchor);
      return;
    }
    const double ra = r_at_tau(p, anchor, dir * x_lo), rb = r_at_tau(p, anchor, dir * x_hi);
    chart_ = make_chart(p, anchor, std::min(ra, rb), std::max(ra, rb), 512);
  }

  RQ operator()(double x) const {
    const double t = dir_ * x;
    if (p_.kind == PotentialKind::schwarzschild) {
      // (r-2m) + 2m log(r-2m) = c tau
      const double m = p_.m, c = p_.c;
      const double w = wlog_solve(c * (base_ + t) / (2 * m) - std::log(2 * m));
      const double xr = 2 * m * w;
      if (!(xr > 0)) throw Error(ErrorCode::OutOfRange, "tau grid reaches the horizon");
      return {2 * m + xr, c * c * xr / (2 * m + xr)};
    }
    if (p_.kind == PotentialKind::de_sitter) {
      const double T = (base_ + t) / p_.ell;
      if (!(T > 0)) throw Error(ErrorCode::OutOfRange, "tau grid crosses r = 0");
      const double ch = std::cosh(T);
      return {p_.ell * std::tanh(T), 1 / (ch * ch)};
    }
    const double r = r_of_tau(*chart_, t);
    return {r, p_.q(r)};
  }

 private:
  const RadialPotential& p_;
  double anchor_;
  int dir_;
  double base_ = 0;
  std::optional<InnerTimeChart> chart_;
};

double vminus_at(const RadialPotential& p, double r, double q) {
  if (p.v_minus) return p.v_minus(r);
  return p.v_minus_equals_q ? q : 0.0;
}

}  // namespace

double default_tau_anchor(const RadialPotential& p) {
  if (p.markers & horizon_at_inner)
    return std::isfinite(p.r_max) ? 0.5 * (p.r_min + p.r_max) : p.r_min + 1;
  if (p.markers & horizon_at_outer) return 0.5 * (p.r_min + p.r_max);
  return p.in_closure(p.r_min) ? p.r_min : p.r_min + 1;
}

WaveGrid build_grid(const WaveScenario& s) {
  const auto& p = s.potential;
  if (s.cells < 2 || !(s.lo < s.hi)) throw Error(ErrorCode::DegenerateCell, "grid needs >= 2 cells");
  double lo = s.lo, hi = s.hi;
  int N = s.cells;
  if (s.inner == BoundaryKind::excised_cutoff) {
    if (!(s.r_cut > lo && s.r_cut < hi))
      throw Error(ErrorCode::OutOfDomain, "r_cut must lie inside the grid");
    const double h0 = (hi - lo) / N;
    N = std::max(2, static_cast<int>(std::lround((hi - s.r_cut) / h0)));
    lo = s.r_cut;
  }
  WaveGrid g;
  g.coord = s.coordinate;
  g.dynamics = s.dynamics.value_or(default_dynamics(p));
  g.h = (hi - lo) / N;
  const int n = p.dimension;
  const auto xs = [&](double i) { return i >= N ? hi : lo + i * g.h; };

  std::optional<TauMap> map;
  if (s.coordinate == GridCoord::tau) {
    const double anchor = s.tau_anchor.value_or(default_tau_anchor(p));
    int dir = s.tau_direction;
    if (dir == 0) dir = (p.markers & horizon_at_inner) ? -1 : 1;
    map.emplace(p, anchor, dir, lo, hi);
  }
  const auto rq = [&](double x) -> RQ {
    if (map) return (*map)(x);
    return {x, p.in_interior(x) ? p.q(x) : std::numeric_limits<double>::quiet_NaN()};
  };
  // dmu/dx and rho |grad x|^2
  const auto weights = [&](const RQ& v) -> std::pair<double, double> {
    const double s2 = std::pow(v.r, n - 1);
    if (map) return {s2 * std::sqrt(v.q), s2 / std::sqrt(v.q)};
    const double grr = p.g_rr(v.r);
    return {s2 * std::sqrt(grr), s2 / std::sqrt(grr)};
  };

  const std::size_t M = static_cast<std::size_t>(N) + 1;
  g.x.resize(M), g.r.resize(M), g.q.resize(M), g.tau.resize(M);
  g.rho.assign(M, 0), g.mass.assign(M, 0), g.pot.assign(M, 0), g.a_half.assign(M - 1, 0);
  for (std::size_t i = 0; i < M; ++i) {
    g.x[i] = xs(i);
    const bool interior = i > 0 && i + 1 < M;
    RQ v{g.x[i], std::numeric_limits<double>::quiet_NaN()};
    if (map || interior || p.in_interior(g.x[i])) v = rq(g.x[i]);
    g.r[i] = v.r, g.q[i] = v.q;
    if (!interior) continue;
    const auto [rho, a] = weights(v);
    (void)a;
    g.rho[i] = rho;
    const double mk = g.dynamics == Dynamics::schrodinger ? rho : rho / v.q;
    g.mass[i] = mk * g.h;
    g.pot[i] = rho * (p.vplus(v.r) - vminus_at(p, v.r, v.q)) * g.h;
    if (!(g.mass[i] > 0) || !std::isfinite(g.mass[i]) || !std::isfinite(g.pot[i]))
      throw Error(ErrorCode::DegenerateCell, "non-positive or non-finite node weight");
  }
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double xm = i + 1 == M - 1 ? 0.5 * (g.x[i] + hi) : lo + (i + 0.5) * g.h;
    g.a_half[i] = weights(rq(xm)).second;
    if (!(g.a_half[i] > 0) || !std::isfinite(g.a_half[i]))
      throw Error(ErrorCode::DegenerateCell, "non-positive or non-finite stiffness weight");
  }
  if (map) {
    g.tau = g.x;
  } else {
    QuadOptions opt;
    opt.singular_points = p.singular_points();
    const Fn f = [&p](double r) { return p.tau_density(r); };
    g.tau[0] = 0;
    for (std::size_t i = 1; i < M; ++i) g.tau[i] = g.tau[i - 1] + integrate(f, g.r[i - 1], g.r[i], opt);
  }
  g.dtau_max = 0;
  g.dtau_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double d = g.tau[i + 1] - g.tau[i];
    if (!(d > 0) || !std::isfinite(d)) throw Error(ErrorCode::DegenerateCell, "zero metric width");
    g.dtau_max = std::max(g.dtau_max, d);
    g.dtau_min = std::min(g.dtau_min, d);
  }
  return g;
}

double cfl_dt(const WaveScenario& s, const WaveGrid& g) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double d = g.tau[i + 1] - g.tau[i];
    double cell = d;
    if (g.dynamics == Dynamics::schrodinger) {
      // tau-speed q^{-1/2}: crossing time d sqrt(q) where q < 1
      double qmin = std::numeric_limits<double>::infinity();
      for (double qq : {g.q[i], g.q[i + 1]})
        if (std::isfinite(qq)) qmin = std::min(qmin, qq);
      if (std::isfinite(qmin)) cell = std::min(d, d * std::sqrt(qmin));
    }
    if (!(cell > 0)) throw Error(ErrorCode::DegenerateCell, "zero metric width");
    m = std::min(m, cell);
  }
  return s.cfl * m;
}

double cfl_dt(const WaveScenario& s) { return cfl_dt(s, build_grid(s)); }

EnergyRecord energy_of(const WaveGrid& g, const WaveState& st) {
  EnergyRecord e;
  e.t = st.t;
  const std::size_t M = g.size();
  for (std::size_t i = 1; i + 1 < M; ++i) {
    e.kinetic += 0.5 * g.mass[i] * st.ut[i] * st.ut[i];
    e.potential += 0.5 * g.pot[i] * st.u[i] * st.u[i];
  }
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double du = st.u[i + 1] - st.u[i];
    e.gradient += 0.5 * g.a_half[i] * du * du / g.h;
  }
  e.total = e.kinetic + e.gradient + e.potential;
  return e;
}

double l2_norm(const WaveGrid& g, const WaveState& st) {
  double s = 0;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) s += g.rho[i] * g.h * st.u[i] * st.u[i];
  return std::sqrt(s);
}

Trajectory run_wave(const WaveScenario& s) {
  Trajectory tr;
  tr.grid = build_grid(s);
  const auto& g = tr.grid;
  const std::size_t M = g.size();
  const double dt0 = cfl_dt(s, g);
  tr.steps = std::max<long>(1, static_cast<long>(std::ceil(s.t_end / dt0 - 1e-9)));
  tr.dt = s.t_end / tr.steps;
  const double dt = tr.dt;

  WaveState st;
  st.u.assign(M, 0);
  st.ut.assign(M, 0);
  double lo_s = std::numeric_limits<double>::infinity(), hi_s = -lo_s;
  for (std::size_t i = 1; i + 1 < M; ++i) {
    if (s.u0) st.u[i] = s.u0->value(g.x[i]);
    if (s.v0) st.ut[i] = s.v0->value(g.x[i]);
    if (st.u[i] != 0 || st.ut[i] != 0) {
      lo_s = std::min(lo_s, g.tau[i]);
      hi_s = std::max(hi_s, g.tau[i]);
    }
    tr.peak0 = std::max(tr.peak0, std::abs(st.u[i]));
  }
  tr.has_support = lo_s <= hi_s;
  if (tr.has_support) tr.support_lo = lo_s, tr.support_hi = hi_s;

  std::vector<double> acc(M, 0);
  const auto source_power = [&](double t) {
    if (!s.source) return 0.0;
    double sum = 0;
    for (std::size_t i = 1; i + 1 < M; ++i) {
      const double f = s.source(t, g.x[i]);
      sum += g.rho[i] * g.h * f * f;
    }
    return sum;
  };
  const auto accel = [&](double t) {
    for (std::size_t i = 1; i + 1 < M; ++i) {
      double F = (g.a_half[i] * (st.u[i + 1] - st.u[i]) - g.a_half[i - 1] * (st.u[i] - st.u[i - 1])) / g.h -
                 g.pot[i] * st.u[i];
      if (s.source) F += g.rho[i] * g.h * s.source(t, g.x[i]);
      acc[i] = F / g.mass[i];
    }
  };
  const auto guard = [&]() {
    for (std::size_t i = 0; i < M; ++i) {
      if (!std::isfinite(st.u[i]) || !std::isfinite(st.ut[i]))
        throw Error(ErrorCode::NonFiniteValue, "non-finite value at t=" + fmt17(st.t));
      if (std::abs(st.u[i]) > 1e12) throw Error(ErrorCode::BlowUp, "|u| > 1e12 at t=" + fmt17(st.t));
    }
  };

  const int every = s.snapshot_every;
  tr.snapshots.push_back(st);
  tr.energy.push_back(energy_of(g, st));
  double sp_prev = source_power(0), sint = 0;
  tr.source_integral.push_back(0);
  accel(0);
  for (long n = 1; n <= tr.steps; ++n) {
    for (std::size_t i = 1; i + 1 < M; ++i) st.ut[i] += 0.5 * dt * acc[i];
    for (std::size_t i = 1; i + 1 < M; ++i) st.u[i] += dt * st.ut[i];
    st.t = n == tr.steps ? s.t_end : n * dt;
    accel(st.t);
    for (std::size_t i = 1; i + 1 < M; ++i) st.ut[i] += 0.5 * dt * acc[i];
    guard();
    const double sp = source_power(st.t);
    sint += 0.5 * dt * (sp_prev + sp);
    sp_prev = sp;
    tr.energy.push_back(energy_of(g, st));
    tr.source_integral.push_back(sint);
    if ((every > 0 && n % every == 0) || n == tr.steps) {
      if (tr.snapshots.back().t != st.t) tr.snapshots.push_back(st);
    }
  }
  if (tr.peak0 == 0)
    for (const auto& sn : tr.snapshots)
      for (double v : sn.u) tr.peak0 = std::max(tr.peak0, std::abs(v));
  return tr;
}

double ConeSpec::T_hat() const { return std::sqrt(1 - delta_hat) * tau0; }

EnergyRecord energy_slice(const WaveGrid& g, const WaveState& st, const std::optional<ConeSpec>& cone) {
  if (!cone) return energy_of(g, st);
  const double k = std::sqrt(1 - cone->delta_hat), T = cone->T_hat();
  const std::size_t M = g.size();
  std::vector<char> in(M, 0);
  for (std::size_t i = 0; i < M; ++i) in[i] = st.t + k * std::abs(g.tau[i] - cone->anchor_tau) < T;
  EnergyRecord e;
  e.t = st.t;
  for (std::size_t i = 1; i + 1 < M; ++i) {
    if (!in[i]) continue;
    e.kinetic += 0.5 * g.mass[i] * st.ut[i] * st.ut[i];
    e.potential += 0.5 * g.pot[i] * st.u[i] * st.u[i];
  }
  for (std::size_t i = 0; i + 1 < M; ++i) {
    if (!in[i] || !in[i + 1]) continue;
    const double du = st.u[i + 1] - st.u[i];
    e.gradient += 0.5 * g.a_half[i] * du * du / g.h;
  }
  e.total = e.kinetic + e.gradient + e.potential;
  return e;
}

json to_json(const CheckReport& c) {
  return {{"check", c.check},
          {"pass", c.pass},
          {"worst_value", c.worst_value},
          {"worst_location", c.worst_location},
          {"worst_time", c.worst_time}};
}

CheckReport verify_cone(const Trajectory& tr, double tol, double speed) {
  CheckReport rep;
  rep.check = "cone";
  const auto& g = tr.grid;
  const double pad = 2 * g.dtau_max;
  for (const auto& sn : tr.snapshots) {
    double amp = 0, loc = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g.tau[i];
      const bool outside = !tr.has_support || t >= tr.support_hi + speed * sn.t + pad ||
                           t <= tr.support_lo - speed * sn.t - pad;
      if (outside && std::abs(sn.u[i]) > amp) amp = std::abs(sn.u[i]), loc = t;
    }
    rep.trace.push_back({sn.t, amp});
    const double rel = tr.peak0 > 0 ? amp / tr.peak0 : amp;
    if (rel > rep.worst_value) rep.worst_value = rel, rep.worst_location = loc, rep.worst_time = sn.t;
    if (amp > tol * tr.peak0) rep.pass = false;
  }
  return rep;
}

CheckReport verify_silo(const Trajectory& tr, double tol) {
  CheckReport rep;
  rep.check = "silo";
  const auto& g = tr.grid;
  const double pad = 2 * g.dtau_max;
  const double t_lo = g.tau.front(), t_hi = g.tau.back();
  for (const auto& sn : tr.snapshots) {
    const bool check_hi =
        sn.t == 0 || !tr.has_support || tr.support_hi + sn.t + pad < t_hi - pad;
    const bool check_lo =
        sn.t == 0 || !tr.has_support || tr.support_lo - sn.t - pad > t_lo + pad;
    double amp_lo = 0, amp_hi = 0, loc_lo = t_lo, loc_hi = t_hi;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = std::abs(sn.u[i]);
      if (g.tau[i] <= t_lo + pad && a > amp_lo) amp_lo = a, loc_lo = g.tau[i];
      if (g.tau[i] >= t_hi - pad && a > amp_hi) amp_hi = a, loc_hi = g.tau[i];
    }
    rep.trace.push_back({sn.t, amp_lo, amp_hi});
    const double scale = tr.peak0 > 0 ? tr.peak0 : 1.0;
    for (auto [chk, amp, loc] : {std::tuple{check_lo, amp_lo, loc_lo}, std::tuple{check_hi, amp_hi, loc_hi}}) {
      if (!chk) continue;
      if (amp / scale > rep.worst_value) rep.worst_value = amp / scale, rep.worst_location = loc, rep.worst_time = sn.t;
      if (amp > tol * tr.peak0) rep.pass = false;
    }
  }
  return rep;
}

DirichletResult solve_dirichlet(const WaveScenario& s, const Fn& f) {
  const auto g = build_grid(s);
  const std::size_t M = g.size();
  DirichletResult res;
  res.x = g.x;
  res.r = g.r;
  res.u.assign(M, 0);
  if (M < 3) return res;
  // interior unknowns 1..M-2
  const std::size_t K = M - 2;
  std::vector<double> diag(K), off(K > 0 ? K - 1 : 0), b(K);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t i = k + 1;
    diag[k] = (g.a_half[i - 1] + g.a_half[i]) / g.h + g.pot[i];
    if (k + 1 < K) off[k] = -g.a_half[i] / g.h;
    b[k] = g.rho[i] * g.h * f(g.r[i]);
  }
  std::vector<double> d(K), y(K);
  for (std::size_t k = 0; k < K; ++k) {
    d[k] = diag[k] - (k ? off[k - 1] * off[k - 1] / d[k - 1] : 0.0);
    if (!(d[k] > 0)) throw Error(ErrorCode::IndefiniteForm, "non-positive pivot at node " + std::to_string(k + 1));
    y[k] = b[k] - (k ? off[k - 1] / d[k - 1] * y[k - 1] : 0.0);
  }
  std::vector<double> u(K);
  for (std::size_t k = K; k-- > 0;) u[k] = y[k] / d[k] - (k + 1 < K ? off[k] / d[k] * u[k + 1] : 0.0);
  double rmax = 0, bmax = 0, form = 0;
  for (std::size_t k = 0; k < K; ++k) {
    double Ku = diag[k] * u[k];
    if (k) Ku += off[k - 1] * u[k - 1];
    if (k + 1 < K) Ku += off[k] * u[k + 1];
    rmax = std::max(rmax, std::abs(Ku - b[k]));
    bmax = std::max(bmax, std::abs(b[k]));
    form += u[k] * Ku;
    res.u[k + 1] = u[k];
  }
  res.residual = bmax > 0 ? rmax / bmax : rmax;
  res.form_value = form;
  return res;
}

void write_snapshot_csv(const WaveGrid& g, const WaveState& st, std::ostream& os) {
  os << "r,tau,u,ut\n";
  for (std::size_t i = 0; i < g.size(); ++i) write_csv_row(os, {g.r[i], g.tau[i], st.u[i], st.ut[i]});
}

void write_energy_csv(const Trajectory& tr, std::ostream& os) {
  os << "t,E_total,E_kinetic,E_gradient,E_potential\n";
  for (const auto& e : tr.energy) write_csv_row(os, {e.t, e.total, e.kinetic, e.gradient, e.potential});
}

double energy_drift(const Trajectory& tr) {
  if (tr.energy.empty()) return 0;
  const double e0 = tr.energy.front().total;
  double worst = 0;
  for (const auto& e : tr.energy) worst = std::max(worst, std::abs(e.total - e0));
  return e0 > 0 ? worst / e0 : worst;
}

double energy_constant(const Trajectory& tr) {
  double c = 0;
  const double e0 = tr.energy.empty() ? 0 : tr.energy.front().total;
  for (std::size_t i = 0; i < tr.energy.size(); ++i) {
    const double base = e0 + tr.source_integral[i];
    if (base > 0) c = std::max(c, tr.energy[i].total / base);
  }
  return c;
}

}  // namespace rcnwave

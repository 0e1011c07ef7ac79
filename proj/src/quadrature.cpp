#include "rcnwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rcnwave/errors.hpp"

namespace rcnwave {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// boost 1.74 compares an unscaled error estimate with a scaled tolerance, so
// short intervals recurse to full depth. Integrate on [-1, 1] instead.
double gk(const Fn& f, double a, double b, double tol) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double err = 0;
  const auto g = [&](double t) { return f(mid + half * t); };
  return half * GK::integrate(g, -1.0, 1.0, 18, tol, &err);
}

// Near a pole at distance `sep` the abscissae themselves carry relative error
// eps*|x|/sep, so a tighter target only drives GK to full depth on noise.
double noise_floor(double a, double b, double sep, double tol) {
  if (!(sep > 0)) return tol;
  const double x = std::max(std::abs(a), std::abs(b));
  return std::max(tol, 16 * std::numeric_limits<double>::epsilon() * x / sep);
}

// Integrate over [lo, hi] refining toward `end` (lo or hi) where a singular
// point sits at distance `dist` >= 0 beyond that end.
double toward_end(const Fn& f, double lo, double hi, bool at_lo, double dist, double tol) {
  const double len = hi - lo;
  double total = 0;
  int quiet = 0;
  for (int k = 0;; ++k) {
    const double outer = std::ldexp(len, -k);
    const double inner = std::ldexp(len, -k - 1);
    const bool last = dist > 0 && inner < dist;
    double piece;
    if (at_lo) {
      const double x1 = lo + outer;
      const double x0 = last ? lo : lo + inner;
      if (!last && x0 == lo) break;
      piece = gk(f, x0, x1, noise_floor(x0, x1, dist + (x0 - lo), tol));
    } else {
      const double x0 = hi - outer;
      const double x1 = last ? hi : hi - inner;
      if (!last && x1 == hi) break;
      piece = gk(f, x0, x1, noise_floor(x0, x1, dist + (hi - x1), tol));
    }
    if (!std::isfinite(piece))
      throw Error(ErrorCode::NonIntegrableAtEndpoint, "non-finite integrand contribution");
    total += piece;
    if (last) return total;
    if (dist == 0) {
      if (std::abs(piece) <= 1e-17 * std::abs(total)) {
        if (++quiet >= 3) return total;
      } else {
        quiet = 0;
      }
    }
  }
  // Ran out of representable refinement while contributions stayed large.
  if (dist == 0) {
    throw Error(ErrorCode::NonIntegrableAtEndpoint,
                "geometric refinement toward the endpoint did not converge");
  }
  return total;
}

}  // namespace

double integrate(const Fn& f, double a, double b, const QuadOptions& opt) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, opt);

  // Split at interior singular points.
  std::vector<double> cuts{a};
  for (double s : opt.singular_points)
    if (s > a && s < b) cuts.push_back(s);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double len = hi - lo;
    double dlo = std::numeric_limits<double>::infinity();
    double dhi = std::numeric_limits<double>::infinity();
    for (double s : opt.singular_points) {
      if (s <= lo) dlo = std::min(dlo, lo - s);
      if (s >= hi) dhi = std::min(dhi, s - hi);
    }
    const bool rlo = dlo < len, rhi = dhi < len;
    if (rlo && rhi) {
      const double mid = 0.5 * (lo + hi);
      total += toward_end(f, lo, mid, true, dlo, opt.rel_tol);
      total += toward_end(f, mid, hi, false, dhi, opt.rel_tol);
    } else if (rlo) {
      total += toward_end(f, lo, hi, true, dlo, opt.rel_tol);
    } else if (rhi) {
      total += toward_end(f, lo, hi, false, dhi, opt.rel_tol);
    } else {
      total += gk(f, lo, hi, opt.rel_tol);
    }
  }
  if (!std::isfinite(total))
    throw Error(ErrorCode::NonIntegrableAtEndpoint, "quadrature produced a non-finite value");
  return total;
}

double gauss_legendre(const Fn& f, double a, double b, int panels) {
  using G = boost::math::quadrature::gauss<double, 10>;
  const double h = (b - a) / panels;
  double s = 0;
  for (int i = 0; i < panels; ++i) s += G::integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

double composite_converged(const Fn& f, double a, double b, int start, double rel_tol) {
  int n = start;
  double prev = gauss_legendre(f, a, b, n);
  while (n < (1 << 20)) {
    n *= 2;
    const double cur = gauss_legendre(f, a, b, n);
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace rcnwave

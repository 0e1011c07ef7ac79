#pragma once

#include <functional>
#include <vector>

namespace rcnwave {

using Fn = std::function<double(double)>;

struct QuadOptions {
  double rel_tol = 1e-12;
  // Radii where the integrand may blow up or lose smoothness; pieces are
  // refined geometrically toward whichever of them is close to an endpoint.
  std::vector<double> singular_points;
};

// Adaptive Gauss-Kronrod on [a, b] (a > b allowed, sign follows).
// Throws NonIntegrableAtEndpoint when refinement toward a singular endpoint
// does not settle.
double integrate(const Fn& f, double a, double b, const QuadOptions& opt = {});

// Fixed composite Gauss-Legendre rule with `panels` equal panels.
double gauss_legendre(const Fn& f, double a, double b, int panels);

// Composite Gauss-Legendre, doubling panels from `start` until successive
// results agree to `rel_tol` (capped at 2^20 panels).
double composite_converged(const Fn& f, double a, double b, int start = 2048,
                           double rel_tol = 1e-9);

}  // namespace rcnwave

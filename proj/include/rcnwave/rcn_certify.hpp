#pragma once

#include <optional>
#include <vector>

#include "rcnwave/io.hpp"
#include "rcnwave/radial_geometry.hpp"

namespace rcnwave {

enum class WindowKind { regular_point, singular_center, infinity_layer };

const char* window_kind_name(WindowKind k);
WindowKind window_kind_from_name(const std::string& s);

struct RcnWindow {
  RadialPotential potential;
  double r_ref = 0;  // tau = 0 here
  double r_lo = 0, r_hi = 0;
  WindowKind kind = WindowKind::singular_center;
};

// Window with the default anchor for its kind: the inner end for a singular
// centre, the window midpoint for a regular point, and for an infinity layer
// the layer edge facing away from the horizon / infinity.
RcnWindow make_window(const RadialPotential& p, double r_lo, double r_hi, WindowKind kind);

// Layers [r_k, r_k + eps r_k^-alpha] marching outward from r0.
std::vector<RcnWindow> power_infinity_layers(const RadialPotential& p, double r0, int count,
                                             double eps);
// Dyadic layers [e + 2^-k L, e + 2^-(k-1) L] toward the horizon end e.
std::vector<RcnWindow> horizon_layers(const RadialPotential& p, int k_min, int k_max);

struct RcnSample {
  double r = 0, tau = 0, dual = 0, qtau = 0;
};

// Chebyshev nodes on the open window with tau, dual and q|tau| attached.
std::vector<RcnSample> sample_window(const RcnWindow& w, int samples);

struct NecessaryResult {
  double sup = 0;
  double arg_r = 0;
};
NecessaryResult necessary_product(const RcnWindow& w, int samples = 256);

struct SearchConfig {
  int samples = 256;
  int a_points = 64;
  int delta0_points = 24;
  double delta0_lo = 1e-3, delta0_hi = 0.2;
  int c_points = 96;
  double c_lo = 1e-4, c_hi = 1e4;
  double inflate = 1.05;  // sampled sups understate the continuum sup
  std::optional<double> pin_A, pin_delta0;
};

struct RcnCertificate {
  bool feasible = false;
  double C0 = 0, eps0 = 0, A = 0, delta0 = 0;
  double delta = 0;
  double sup_dual = 0, sup_qtau = 0, necessary_sup = 0;
  double margin = 0;
  std::vector<RcnSample> samples;
};

RcnCertificate certify_window(const RcnWindow& w, const SearchConfig& cfg = {});

double delta_from(double A, double delta0);
double delta_bound(const RcnCertificate& cert);

struct SweepReport {
  bool ok = false;
  double target_delta = 0, A = 0, delta0 = 0;
  std::vector<RcnWindow> windows;
  std::vector<RcnCertificate> certificates;
};

SweepReport uniform_delta_sweep(const RadialPotential& p, const std::vector<RcnWindow>& windows,
                                double target_delta, SearchConfig cfg = {});

json to_json(const RcnCertificate& c, bool with_samples = true);
json to_json(const SweepReport& s);

}  // namespace rcnwave

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcnwave/io.hpp"
#include "rcnwave/radial_geometry.hpp"
#include "rcnwave/rcn_certify.hpp"

namespace rcnwave {

enum class ProfileShape { polynomial_bump, gaussian_bump, piecewise_linear };
enum class ProfileCoord { radius, log_radius };

const char* shape_name(ProfileShape s);
ProfileShape shape_from_name(const std::string& s);

// amplitude * r^power * chi(z), z running over [-1, 1] across the support
// (linearly in r or in log r). chi is (1-z^2)^order, a clipped Gaussian, or a
// tent; all vanish at z = +-1.
struct TestProfile {
  ProfileShape shape = ProfileShape::polynomial_bump;
  double a = 0, b = 1;
  double amplitude = 1;
  ProfileCoord coordinate = ProfileCoord::radius;
  double power = 0;
  int order = 2;

  double center() const;
  double width() const;  // half-width of the support in its coordinate
  double value(double r) const;
  double deriv(double r) const;  // d/dr
};

TestProfile bump(double a, double b, double amplitude = 1, int order = 2);
TestProfile bump_at(double center, double half_width, double amplitude = 1, int order = 2);
TestProfile log_bump(double a, double b, double power, int order = 2);

// int_a^b g(r) dr in the profile's own coordinate, panels doubling to 1e-9.
double profile_integral(const TestProfile& f, const Fn& g, int panels = 2048);

json to_json(const TestProfile& f);

// f(tau) = tau^s * sum_k h[k] tau^k
struct HardyProfile {
  double s = 1;
  std::vector<double> h{1.0};
};

struct HardyResult {
  double lhs = 0, rhs = 0;
  bool holds = false;
};

// int_0^tau0 f^2/tau^2 <= 4 int_0^tau0 f'^2
HardyResult hardy_check(const HardyProfile& f, double tau0);

struct FormResult {
  double lhs = 0, rhs = 0;
  bool holds = false;
};

// int q phi^2 dmu <= delta int |grad phi|^2 dmu
FormResult positivity_check(const RadialPotential& p, const TestProfile& phi, const RcnWindow& w,
                            double delta);

// Random bumps with support strictly inside the window (away from r_lo).
std::vector<TestProfile> random_bump_family(const RcnWindow& w, int count, std::uint64_t seed);

struct FalsificationReport {
  std::string condition;
  json parameters;
  bool found = false;
  int trials = 0;
  TestProfile witness;
  double lhs = 0, rhs = 0;
};

json to_json(const FalsificationReport& r);

// Search log-bumps r^((2-n)/2 + jitter) chi(log r) on (r_lo, r_hi) for a
// profile with int q phi^2 > delta int |grad phi|^2.
FalsificationReport positivity_falsify(const RadialPotential& p, double delta, double r_lo,
                                       double r_hi, int trials, std::uint64_t seed);

// Same search against int |grad phi|^2 - int beta2 r^-2 phi^2 >= 0 in dimension n.
FalsificationReport nonnegativity_falsify(int n, double beta2, int trials, std::uint64_t seed);

// Piecewise-linear cutoffs on the tau line: member k equals 1 within
// radius_k - eps of centre_k, 0 beyond radius_k - eps/2, linear between.
struct CutoffFamily {
  std::vector<double> centers, radii;
  double overlap = 0.2;  // tau_eps
  double region_lo = 0, region_hi = 0;  // where sum J^2 = 1 is required
  bool renormalize = true;

  std::size_t size() const { return centers.size(); }
  double raw(std::size_t k, double t) const;
  double raw_deriv(std::size_t k, double t) const;
  double J(std::size_t k, double t) const;
  double J_deriv(std::size_t k, double t) const;
  double sum_sq(double t) const;
  double grad_sq(double t) const;  // sum_k J_k'^2
  double support_lo() const;
  double support_hi() const;
  std::vector<double> breakpoints() const;
};

struct ImsResult {
  double sup = 0;
  double arg = 0;
  double max_coverage_dev = 0;
};

// sup over the supports of sum |J_k'|^2; CoverageGap when sum J^2 misses 1
// by more than 1e-9 on the declared region.
ImsResult ims_error(const CutoffFamily& fam, int samples = 200001);

struct ImsIdentity {
  double lhs = 0, rhs = 0, rel_err = 0;
};

// int phi'^2 against sum int ((J phi)')^2 - int (sum J'^2) phi^2 on the tau line.
ImsIdentity ims_identity(const CutoffFamily& fam, const TestProfile& phi);

// delta_t int |grad phi|^2 + int q phi^2 >= int V_- phi^2
struct MinorantResult {
  double gradient = 0, minorant = 0, vminus = 0;
  bool holds = false;
};
MinorantResult minorant_form_check(const RadialPotential& p, double delta_t,
                                   const TestProfile& phi);

struct SelfAdjointness {
  bool feasible = false;
  double beta_witness = 0;
  double min_value = 0;  // min over beta > 0 of beta^2 - (n-2) beta + 1 + alpha
};
SelfAdjointness self_adjointness_feasible(int n, double alpha);

}  // namespace rcnwave

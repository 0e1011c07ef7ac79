#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rcnwave/quadrature.hpp"

namespace rcnwave {

enum class PotentialKind {
  minkowski,
  power_singular,
  log_singular,
  power_infinity,
  schwarzschild,
  reissner_nordstrom,
  de_sitter,
  coulomb,
  spectrum_hydrogen,
  custom_table,
};

const char* kind_name(PotentialKind k);
PotentialKind kind_from_name(const std::string& s);

// Domain end markers (bit flags).
enum Marker : unsigned {
  singularity_at_inner = 1u,
  horizon_at_inner = 2u,
  horizon_at_outer = 4u,
  unbounded_outer = 8u,
};

struct SampledTable;  // monotone cubic interpolant of a sampled q

struct RadialPotential {
  PotentialKind kind = PotentialKind::minkowski;
  // Family parameters; which ones matter depends on kind.
  double alpha = 1, beta = 1, delta = 0.5, m = 1, c = 1, e = 0, ell = 1;
  int level = 1;
  int rn_case = 0;  // Reissner-Nordstrom branch selecting the domain
  int dimension = 3;

  Fn v_plus;                  // empty means 0
  bool v_minus_equals_q = false;
  Fn v_minus;                 // explicit V_-, overrides the flag when set

  double r_min = 0, r_max = 0;  // r_max = +inf for unbounded domains
  unsigned markers = 0;
  std::shared_ptr<const SampledTable> table;

  double q(double r) const;
  double dlogq(double r) const;       // q'/q
  double g_rr(double r) const;        // spatial metric radial coefficient
  double tau_density(double r) const; // q^{-1/2} sqrt(g_rr)
  double vminus(double r) const;
  double vplus(double r) const;
  double V(double r) const { return vplus(r) - vminus(r); }

  // Radii where q^{-1/2} sqrt(g_rr) loses smoothness (centres, horizons).
  std::vector<double> singular_points() const;

  bool in_closure(double r) const;
  bool in_interior(double r) const;
  // Horizon radii at which tau diverges.
  bool is_horizon(double r) const;
  std::string describe() const;
};

// Catalog constructors.
RadialPotential minkowski(int n = 3, double c = 1.0);
RadialPotential power_singular(double alpha, double beta, int n);
RadialPotential log_singular(double delta, int n, double r_max = 0.5);
RadialPotential power_infinity(double alpha, double beta, int n);
RadialPotential schwarzschild(double m, double c = 1.0);
RadialPotential reissner_nordstrom(double m, double e, int rn_case);
RadialPotential de_sitter(double ell);
RadialPotential coulomb(int n = 3);
RadialPotential spectrum_hydrogen(int level, int n = 3);
RadialPotential custom_table(std::vector<double> r, std::vector<double> q, int n);

// Reissner-Nordstrom horizon radii (r_minus, r_plus); equal when m^2 = e^2.
std::pair<double, double> rn_horizons(double m, double e);
int rn_case_for(double m, double e, double r, bool horizon_anchor = false);

// Closed-form antiderivative of q^{-1/2} sqrt(g_rr) with catalog constants.
std::optional<double> closed_form_tau(const RadialPotential& p, double r);
std::optional<std::string> closed_form_tag(const RadialPotential& p);

double tau_of_r(const RadialPotential& p, double r_ref, double r, double rel_tol = 1e-12);

struct InnerTimeChart {
  RadialPotential potential;
  double r_ref = 0;
  std::optional<std::string> closed_form;
  std::vector<double> r;    // strictly increasing
  std::vector<double> tau;  // strictly increasing
};

InnerTimeChart make_chart(const RadialPotential& p, double r_ref, double r_lo, double r_hi,
                          int uniform_samples = 256);
double r_of_tau(const InnerTimeChart& chart, double tau);
// tau at r using the chart's nearest tabulated node as the quadrature start.
double chart_tau(const InnerTimeChart& chart, double r);

struct GeometryProfile {
  double q = 0, sigma = 0, w = 0, tau = 0;
};
GeometryProfile geometry_profile(const RadialPotential& p, double r_ref, double r);

// tau |d log w / d tau| with w = q^{3/4} sigma tau.
double dual_potential(const RadialPotential& p, double r_ref, double r);
// Same quantity when tau(r) is already known.
double dual_from_tau(const RadialPotential& p, double r, double tau);

enum class DomainEnd { inner, outer };

struct CompletenessReport {
  bool diverges = false;
  DomainEnd endpoint = DomainEnd::inner;
  double anchor = 0;
  std::vector<std::pair<double, double>> trace;  // (cutoff radius, |tau|)
};

CompletenessReport completeness_report(const RadialPotential& p, DomainEnd end,
                                       double threshold = 1e6, int max_levels = 60);

void write_chart_csv(const InnerTimeChart& chart, std::ostream& os);

}  // namespace rcnwave

#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rcnwave/io.hpp"
#include "rcnwave/radial_geometry.hpp"

namespace rcnwave {

enum class SpacetimeFamily {
  minkowski,
  schwarzschild,
  reissner_nordstrom,
  de_sitter,
  coulomb_hydrogen,
  spectrum_hydrogen,
};

const char* family_name(SpacetimeFamily f);
SpacetimeFamily family_from_name(const std::string& s);

struct SpacetimeModel {
  SpacetimeFamily family = SpacetimeFamily::minkowski;
  double m = 1, c = 1, e = 0, ell = 1;
  int level = 1;
  // selects cases 2 / 5 instead of 1 / 4 on the inner Reissner-Nordstrom branches
  bool horizon_anchor = false;

  void validate() const;
  std::string describe() const;
};

// Branch index 1..7 of the Reissner-Nordstrom tau table.
int rn_regime(double m, double e, double r, bool horizon_anchor = false);

// Radial potential carrying this model's q and spatial metric on the branch containing r.
RadialPotential model_potential(const SpacetimeModel& model, double r);

// Closed-form tau (the catalog antiderivative).
double spacetime_tau(const SpacetimeModel& model, double r);

// tau(r) 3e^2/r^3 with tau integrated from the centre.
double origin_taylor_ratio(const SpacetimeModel& model, double r);

struct ConeCurve {
  std::vector<double> r, t_past, t_future;
};

ConeCurve light_cone(const SpacetimeModel& model, double t0, double r0,
                     const std::vector<double>& rs);
void write_cone_csv(const ConeCurve& c, std::ostream& os);

using Rational = boost::multiprecision::cpp_rational;

// (1/6) |1/n1^2 - 1/n2^2| |n2^3 - n1^3|
Rational uncertainty(int n1, int n2);

struct UncertaintyMinimum {
  Rational value;
  int n1 = 0, n2 = 0;
  bool matches_paper = false;  // minimum is 7/8 at (1, 2)
};
UncertaintyMinimum uncertainty_minimum(int N);

json rational_json(const Rational& q);
json to_json(const UncertaintyMinimum& u);

}  // namespace rcnwave

#include "rcnwave/spacetimes.hpp"

#include <cmath>
#include <sstream>

#include "rcnwave/errors.hpp"

namespace rcnwave {

const char* family_name(SpacetimeFamily f) {
  switch (f) {
    case SpacetimeFamily::minkowski: return "minkowski";
    case SpacetimeFamily::schwarzschild: return "schwarzschild";
    case SpacetimeFamily::reissner_nordstrom: return "reissner_nordstrom";
    case SpacetimeFamily::de_sitter: return "de_sitter";
    case SpacetimeFamily::coulomb_hydrogen: return "coulomb_hydrogen";
    case SpacetimeFamily::spectrum_hydrogen: return "spectrum_hydrogen";
  }
  return "?";
}

SpacetimeFamily family_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(SpacetimeFamily::spectrum_hydrogen); ++i) {
    const auto f = static_cast<SpacetimeFamily>(i);
    if (s == family_name(f)) return f;
  }
  throw Error(ErrorCode::Schema, "unknown spacetime model '" + s + "'");
}

void SpacetimeModel::validate() const {
  const bool ok = std::isfinite(m) && std::isfinite(c) && std::isfinite(e) && std::isfinite(ell) &&
                  m > 0 && c > 0 && e >= 0 && ell > 0 && level >= 1;
  if (!ok) throw Error(ErrorCode::Schema, "spacetime parameters must be finite and positive");
}

std::string SpacetimeModel::describe() const {
  std::ostringstream os;
  os << family_name(family);
  switch (family) {
    case SpacetimeFamily::minkowski: os << "(c=" << c << ")"; break;
    case SpacetimeFamily::schwarzschild: os << "(m=" << m << ", c=" << c << ")"; break;
    case SpacetimeFamily::reissner_nordstrom: os << "(m=" << m << ", e=" << e << ")"; break;
    case SpacetimeFamily::de_sitter: os << "(ell=" << ell << ")"; break;
    case SpacetimeFamily::spectrum_hydrogen: os << "(n=" << level << ")"; break;
    default: break;
  }
  return os.str();
}

int rn_regime(double m, double e, double r, bool horizon_anchor) {
  if (!(r >= 0)) throw Error(ErrorCode::OutOfDomain, "r must be nonnegative");
  return rn_case_for(m, e, r, horizon_anchor);
}

RadialPotential model_potential(const SpacetimeModel& md, double r) {
  md.validate();
  switch (md.family) {
    case SpacetimeFamily::minkowski: return minkowski(3, md.c);
    case SpacetimeFamily::schwarzschild: return schwarzschild(md.m, md.c);
    case SpacetimeFamily::reissner_nordstrom:
      return reissner_nordstrom(md.m, md.e, rn_regime(md.m, md.e, r, md.horizon_anchor));
    case SpacetimeFamily::de_sitter: return de_sitter(md.ell);
    case SpacetimeFamily::coulomb_hydrogen: return coulomb(3);
    case SpacetimeFamily::spectrum_hydrogen: return spectrum_hydrogen(md.level, 3);
  }
  return minkowski();
}

double spacetime_tau(const SpacetimeModel& md, double r) {
  const auto p = model_potential(md, r);
  if (!p.in_closure(r)) throw Error(ErrorCode::OutOfBranch, "r outside the model's branch");
  return *closed_form_tau(p, r);
}

double origin_taylor_ratio(const SpacetimeModel& md, double r) {
  if (md.family != SpacetimeFamily::reissner_nordstrom)
    throw Error(ErrorCode::WrongCase, "Taylor ratio is defined for Reissner-Nordstrom only");
  const int cs = rn_regime(md.m, md.e, r, false);
  if (cs != 1 && cs != 4 && cs != 7)
    throw Error(ErrorCode::WrongCase, "r is not on a branch containing the centre");
  if (!(md.e > 0)) throw Error(ErrorCode::WrongCase, "needs e > 0");
  const auto p = reissner_nordstrom(md.m, md.e, cs);
  return tau_of_r(p, 0.0, r) * 3 * md.e * md.e / (r * r * r);
}

ConeCurve light_cone(const SpacetimeModel& md, double t0, double r0, const std::vector<double>& rs) {
  const auto p0 = model_potential(md, r0);
  if (!p0.in_closure(r0)) throw Error(ErrorCode::OutOfDomain, "cone vertex outside the domain");
  const double tau0 = spacetime_tau(md, r0);
  ConeCurve c;
  for (double r : rs) {
    const auto p = model_potential(md, r);
    if (p.rn_case != p0.rn_case || !p.in_closure(r))
      throw Error(ErrorCode::OutOfDomain, "cone sample outside the vertex's branch");
    const double d = std::abs(spacetime_tau(md, r) - tau0);
    c.r.push_back(r);
    c.t_past.push_back(t0 - d);
    c.t_future.push_back(t0 + d);
  }
  return c;
}

void write_cone_csv(const ConeCurve& c, std::ostream& os) {
  os << "r,t_past,t_future\n";
  for (std::size_t i = 0; i < c.r.size(); ++i) write_csv_row(os, {c.r[i], c.t_past[i], c.t_future[i]});
}

Rational uncertainty(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorCode::OutOfRange, "levels must be positive integers");
  if (n1 == n2) throw Error(ErrorCode::EqualLevels, "levels must differ");
  const Rational a(1, static_cast<long long>(n1) * n1), b(1, static_cast<long long>(n2) * n2);
  const long long c1 = static_cast<long long>(n1) * n1 * n1, c2 = static_cast<long long>(n2) * n2 * n2;
  Rational de = abs(a - b);
  Rational dt = Rational(c2 > c1 ? c2 - c1 : c1 - c2);
  return de * dt / 6;
}

UncertaintyMinimum uncertainty_minimum(int N) {
  if (N < 2) throw Error(ErrorCode::OutOfRange, "level cap must be >= 2");
  UncertaintyMinimum best;
  bool have = false;
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      const Rational v = uncertainty(i, j);
      if (!have || v < best.value) best.value = v, best.n1 = i, best.n2 = j, have = true;
    }
  best.matches_paper = best.value == Rational(7, 8) && best.n1 == 1 && best.n2 == 2;
  return best;
}

json rational_json(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  json j;
  // integers as JSON numbers when they fit, digit strings otherwise
  if (abs(num) < boost::multiprecision::cpp_int(1) << 62 && den < boost::multiprecision::cpp_int(1) << 62) {
    j["num"] = num.convert_to<long long>();
    j["den"] = den.convert_to<long long>();
  } else {
    j["num"] = num.str();
    j["den"] = den.str();
  }
  return j;
}

json to_json(const UncertaintyMinimum& u) {
  json j = rational_json(u.value);
  j["n1"] = u.n1;
  j["n2"] = u.n2;
  j["matches_paper"] = u.matches_paper;
  return j;
}

}  // namespace rcnwave

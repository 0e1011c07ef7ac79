#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rcnwave/errors.hpp"
#include "rcnwave/radial_geometry.hpp"

using namespace rcnwave;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// frozen mpmath values (30 digits, truncated)
constexpr double kSchw3to4 = 2.38629436111989061883;   // int_3^4 r/(r-2)
constexpr double kRn1 = 0.00697827577302072143111;      // m=2 e=1, int_0^0.2 r^2/Delta
constexpr double kRn4 = 0.113705638880109381165;        // m=e=1, int_0^0.5
constexpr double kRn7 = 0.107718139470146455696;        // m=1 e=2, int_0^1
constexpr double kRn3 = 7.86990956640768897233;         // m=2 e=1, int_5^8
constexpr double kRn6 = 2.88629436111989061883;         // m=e=1, int_2^3
constexpr double kLog = 0.00645264721980150078531;      // delta=0.5: int_0^0.1 r(-ln r)^0.25
constexpr double kPinf = 0.603647909938750510111;       // alpha=0.5 beta=1: int_10^12 r^-0.5

}  // namespace

TEST_CASE("tau of r: trivial and catalog values") {
  CHECK(tau_of_r(minkowski(3), 0, 0.7) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(tau_of_r(power_singular(1, 0.5, 3), 0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(*closed_form_tau(schwarzschild(1), 3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tau_of_r(de_sitter(1), 0, 0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-10));
  CHECK(tau_of_r(coulomb(), 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("tau of r against frozen quadrature oracles") {
  CHECK(rel(tau_of_r(schwarzschild(1), 3, 4), kSchw3to4) < 1e-10);
  CHECK(rel(tau_of_r(reissner_nordstrom(2, 1, 1), 0, 0.2), kRn1) < 1e-10);
  CHECK(rel(tau_of_r(reissner_nordstrom(1, 1, 4), 0, 0.5), kRn4) < 1e-10);
  CHECK(rel(tau_of_r(reissner_nordstrom(1, 2, 7), 0, 1), kRn7) < 1e-10);
  CHECK(rel(tau_of_r(reissner_nordstrom(2, 1, 3), 5, 8), kRn3) < 1e-10);
  CHECK(rel(tau_of_r(reissner_nordstrom(1, 1, 6), 2, 3), kRn6) < 1e-10);
  CHECK(rel(tau_of_r(log_singular(0.5, 3), 0, 0.1), kLog) < 1e-10);
  CHECK(rel(tau_of_r(power_infinity(0.5, 1, 3), 10, 12), kPinf) < 1e-10);
}

TEST_CASE("tau is signed and antisymmetric in its endpoints") {
  const auto p = schwarzschild(1);
  CHECK(tau_of_r(p, 4, 3) == doctest::Approx(-tau_of_r(p, 3, 4)).epsilon(1e-14));
  CHECK(tau_of_r(p, 3, 3) == 0.0);
}

TEST_CASE("closed forms differentiate back to the tau density") {
  std::vector<RadialPotential> ps{schwarzschild(1, 2), de_sitter(1.5), coulomb(), spectrum_hydrogen(3),
                                  power_singular(1, 0.5, 3), minkowski(3, 2)};
  for (int c : {1, 2, 3}) ps.push_back(reissner_nordstrom(2, 1, c));
  for (int c : {4, 5, 6}) ps.push_back(reissner_nordstrom(1, 1, c));
  ps.push_back(reissner_nordstrom(1, 2, 7));
  for (const auto& p : ps) {
    const double lo = p.r_min, hi = std::isfinite(p.r_max) ? p.r_max : p.r_min + 4;
    for (int k = 1; k < 10; ++k) {
      const double r = lo + (hi - lo) * k / 10.0, h = 1e-5 * (hi - lo);
      const double d = (*closed_form_tau(p, r + h) - *closed_form_tau(p, r - h)) / (2 * h);
      CAPTURE(p.describe());
      CAPTURE(r);
      CHECK(d == doctest::Approx(p.tau_density(r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("tau is strictly increasing on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const std::vector<RadialPotential> ps{schwarzschild(1), de_sitter(1), power_singular(1, 0.5, 3),
                                        reissner_nordstrom(1, 2, 7), coulomb()};
  for (const auto& p : ps) {
    const double lo = p.r_min, hi = std::isfinite(p.r_max) ? p.r_max : p.r_min + 5;
    for (int i = 0; i < 1000; ++i) {
      double a = lo + (hi - lo) * (0.01 + 0.98 * u(rng)), b = lo + (hi - lo) * (0.01 + 0.98 * u(rng));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      REQUIRE(*closed_form_tau(p, b) > *closed_form_tau(p, a));
    }
  }
}

TEST_CASE("gradient of tau has unit metric length") {
  const std::vector<RadialPotential> ps{schwarzschild(1), de_sitter(1), power_singular(1, 0.5, 3),
                                        log_singular(0.5, 3), power_infinity(0.5, 1, 3)};
  for (const auto& p : ps) {
    const double r = p.kind == PotentialKind::schwarzschild ? 3.0 : 0.3, h = 1e-5;
    const double d = (tau_of_r(p, r, r + h) - tau_of_r(p, r, r - h)) / (2 * h);
    CHECK(d * std::sqrt(p.q(r)) / std::sqrt(p.g_rr(r)) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("chart inversion and round trip") {
  const auto dS = make_chart(de_sitter(1), 0, 0, 0.9);
  CHECK(r_of_tau(dS, 0.5 * std::log(3.0)) == doctest::Approx(0.5).epsilon(1e-10));
  const auto mk = make_chart(minkowski(3), 0, 0, 2);
  CHECK(r_of_tau(mk, 0.7) == doctest::Approx(0.7).epsilon(1e-12));
  const auto ps = make_chart(power_singular(1, 0.5, 3), 0, 0, 2);
  CHECK(r_of_tau(ps, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(r_of_tau(ps, 100.0), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.89);
  for (int i = 0; i < 200; ++i) {
    const double r = u(rng);
    const double back = r_of_tau(dS, chart_tau(dS, r));
    REQUIRE(std::abs(back - r) <= 1e-8 * std::max(1.0, r));
  }
}

TEST_CASE("chart table agrees with the closed form") {
  const auto c = make_chart(schwarzschild(1), 3, 2 + 1e-6, 4);
  REQUIRE(c.closed_form.has_value());
  const double base = *closed_form_tau(c.potential, 3);
  for (std::size_t i = 0; i < c.r.size(); ++i) {
    const double cf = *closed_form_tau(c.potential, c.r[i]) - base;
    REQUIRE(std::abs(c.tau[i] - cf) / std::max(1.0, std::abs(cf)) <= 1e-8);
  }
}

TEST_CASE("geometry profile examples") {
  auto g = geometry_profile(minkowski(3), 0, 1);
  CHECK(g.q == 1);
  CHECK(g.sigma == doctest::Approx(1));
  CHECK(g.w == doctest::Approx(1));
  g = geometry_profile(power_singular(1, 0.5, 3), 0, 1);
  CHECK(g.q == doctest::Approx(0.25));
  CHECK(g.w == doctest::Approx(std::pow(0.25, 0.75)).epsilon(1e-10));
}

TEST_CASE("dual potential examples") {
  for (double r : {1e-6, 1e-3, 0.2, 0.9}) {
    CHECK(dual_potential(power_singular(1, 0.3, 3), 0, r) == doctest::Approx(0.75).epsilon(1e-8));
    CHECK(dual_potential(minkowski(3), 0, r) == doctest::Approx(2.0).epsilon(1e-10));
  }
  // (n - alpha + 1) / (2 (alpha + 1))
  CHECK(dual_potential(power_singular(0.5, 1, 4), 0, 0.3) == doctest::Approx(4.5 / 3.0).epsilon(1e-8));
  CHECK_THROWS_AS(dual_potential(minkowski(3), 0.5, 0.5), Error);
}

TEST_CASE("completeness at horizons and centres") {
  CHECK(completeness_report(schwarzschild(1), DomainEnd::inner).diverges);
  CHECK(completeness_report(de_sitter(1), DomainEnd::outer).diverges);
  CHECK_FALSE(completeness_report(power_singular(1, 0.5, 3), DomainEnd::inner).diverges);
  CHECK(completeness_report(minkowski(3), DomainEnd::outer).diverges);
}

TEST_CASE("custom table reproduces the flat chart") {
  std::vector<double> r, q;
  for (int i = 0; i <= 40; ++i) r.push_back(0.1 + 0.05 * i), q.push_back(4.0);
  const auto p = custom_table(r, q, 3);
  CHECK(tau_of_r(p, 0.5, 1.5) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(dual_potential(p, 0.1, 1.0) == doctest::Approx(0.45 * 2 * (1 + 1 / 0.9)).epsilon(1e-6));
  CHECK_THROWS_AS(custom_table({0, 1, 2, 3}, {1, 1, -1, 1}, 3), Error);
  CHECK_THROWS_AS(custom_table({0, 1, 1, 3}, {1, 1, 1, 1}, 3), Error);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(tau_of_r(schwarzschild(1), 3, 1.5), Error);
  CHECK_THROWS_AS(tau_of_r(de_sitter(1), 0, 1.5), Error);
  CHECK_THROWS_AS(rn_case_for(2, 1, 1.0), Error);
  CHECK(rn_case_for(2, 1, 0.2) == 1);
  CHECK(rn_case_for(1, 1, 0.5) == 4);
  CHECK(rn_case_for(1, 2, 7) == 7);
}

TEST_CASE("chart csv is two columns with a header") {
  std::ostringstream os;
  write_chart_csv(make_chart(minkowski(3), 0, 0, 1, 8), os);
  CHECK(os.str().rfind("r,tau\n", 0) == 0);
}

#include <doctest.h>

#include <cmath>

#include "rcnwave/errors.hpp"
#include "rcnwave/spacetimes.hpp"

using namespace rcnwave;

namespace {

SpacetimeModel rn(double m, double e, bool anchor = false) {
  SpacetimeModel md;
  md.family = SpacetimeFamily::reissner_nordstrom;
  md.m = m, md.e = e, md.horizon_anchor = anchor;
  return md;
}

SpacetimeModel of(SpacetimeFamily f) {
  SpacetimeModel md;
  md.family = f;
  return md;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Schema;
}

// r_lo * (r_hi / r_lo)^(k / (n-1)), or the same spacing applied to the
// distance from a horizon end
std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(lo * std::pow(hi / lo, k / double(n - 1)));
  return v;
}

}  // namespace

TEST_CASE("regime examples") {
  CHECK(rn_regime(2, 1, 0.2) == 1);
  CHECK(rn_regime(2, 1, 0.2, true) == 2);
  CHECK(rn_regime(2, 1, 5) == 3);
  CHECK(rn_regime(1, 1, 0.5) == 4);
  CHECK(rn_regime(1, 1, 0.5, true) == 5);
  CHECK(rn_regime(1, 1, 3) == 6);
  CHECK(rn_regime(1, 2, 7) == 7);
  CHECK(code_of([] { rn_regime(1, 1, 1); }) == ErrorCode::OnHorizon);
  const auto [rm, rp] = rn_horizons(2, 1);
  CHECK(rm == doctest::Approx(2 - std::sqrt(3.0)));
  CHECK(rp == doctest::Approx(2 + std::sqrt(3.0)));
  CHECK(code_of([=] { rn_regime(2, 1, rp); }) == ErrorCode::OnHorizon);
}

TEST_CASE("tortoise closed forms") {
  CHECK(spacetime_tau(of(SpacetimeFamily::coulomb_hydrogen), 1) == doctest::Approx(2.0 / 3));
  auto h = of(SpacetimeFamily::spectrum_hydrogen);
  h.level = 2;
  CHECK(spacetime_tau(h, 0.5) == doctest::Approx(0.5));
  auto d = of(SpacetimeFamily::de_sitter);
  d.ell = 2;
  CHECK(spacetime_tau(d, 1) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  auto s = of(SpacetimeFamily::schwarzschild);
  CHECK(spacetime_tau(s, 3) == doctest::Approx(1.0));
  auto mk = of(SpacetimeFamily::minkowski);
  mk.c = 2;
  CHECK(spacetime_tau(mk, 3) == doctest::Approx(1.5));
  CHECK(code_of([&] { spacetime_tau(d, 2.5); }) == ErrorCode::OutOfBranch);
  CHECK(code_of([&] { spacetime_tau(s, 1); }) == ErrorCode::OutOfBranch);
}

TEST_CASE("closed forms agree with quadrature on every branch") {
  struct Branch {
    SpacetimeModel md;
    double ref;
    std::vector<double> radii;
  };
  const double rm = 2 - std::sqrt(3.0), rp = 2 + std::sqrt(3.0);
  std::vector<Branch> bs;
  bs.push_back({rn(2, 1), 0, logspace(1e-3, rm - 1e-6, 200)});
  bs.push_back({rn(2, 1, true), rm / 2, logspace(1e-3, rm - 1e-6, 200)});
  {
    std::vector<double> r;
    for (double d : logspace(1e-6, 10, 200)) r.push_back(rp + d);
    bs.push_back({rn(2, 1), rp + 1, r});
  }
  bs.push_back({rn(1, 1), 0, logspace(1e-3, 1 - 1e-6, 200)});
  bs.push_back({rn(1, 1, true), 0.5, logspace(1e-3, 1 - 1e-6, 200)});
  {
    std::vector<double> r;
    for (double d : logspace(1e-6, 10, 200)) r.push_back(1 + d);
    bs.push_back({rn(1, 1), 2, r});
  }
  bs.push_back({rn(1, 2), 0, logspace(1e-3, 10, 200)});
  {
    std::vector<double> r;
    for (double d : logspace(1e-6, 2, 200)) r.push_back(2 + d);
    bs.push_back({of(SpacetimeFamily::schwarzschild), 3, r});
  }
  {
    std::vector<double> r;
    for (double d : logspace(1e-6, 1, 200)) r.push_back(1 - d);
    bs.push_back({of(SpacetimeFamily::de_sitter), 0, r});
  }
  bs.push_back({of(SpacetimeFamily::coulomb_hydrogen), 0, logspace(1e-4, 10, 200)});
  auto sh = of(SpacetimeFamily::spectrum_hydrogen);
  sh.level = 3;
  bs.push_back({sh, 0, logspace(1e-4, 10, 200)});

  for (const auto& b : bs) {
    const auto p = model_potential(b.md, b.radii.front());
    const double base = spacetime_tau(b.md, b.ref);
    double worst = 0;
    for (double r : b.radii) {
      if (r == b.ref) continue;
      const double cf = spacetime_tau(b.md, r) - base, qd = tau_of_r(p, b.ref, r);
      worst = std::max(worst, std::abs(cf - qd) / std::abs(qd));
    }
    CAPTURE(p.describe());
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("each branch is continuous and strictly monotone") {
  const double rm = 2 - std::sqrt(3.0), rp = 2 + std::sqrt(3.0);
  struct Range {
    SpacetimeModel md;
    double lo, hi;
  };
  const std::vector<Range> rs{{rn(2, 1), 0, rm * (1 - 1e-9)},       {rn(2, 1, true), 1e-9, rm * (1 - 1e-9)},
                              {rn(2, 1), rp * (1 + 1e-9), rp + 20}, {rn(1, 1), 0, 1 - 1e-9},
                              {rn(1, 1, true), 1e-9, 1 - 1e-9},        {rn(1, 1), 1 + 1e-9, 20},
                              {rn(1, 2), 0, 20}};
  for (const auto& r : rs) {
    const auto p = model_potential(r.md, 0.5 * (r.lo + r.hi));
    double x0 = r.lo, t0 = spacetime_tau(r.md, x0);
    for (int k = 1; k <= 1000; ++k) {
      const double x = r.lo + (r.hi - r.lo) * k / 1000.0;
      const double t = spacetime_tau(r.md, x);
      REQUIRE(t > t0);
      // no jumps: the increment is bracketed by the density at the cell ends
      const double d0 = p.tau_density(x0), d1 = p.tau_density(x);
      REQUIRE(t - t0 <= (1 + 1e-9) * std::max(d0, d1) * (x - x0));
      REQUIRE(t - t0 >= (1 - 1e-9) * std::min(d0, d1) * (x - x0));
      x0 = x, t0 = t;
    }
  }
}

TEST_CASE("light cones") {
  const std::vector<double> rs{0, 0.25, 0.5, 1, 2};
  auto c = light_cone(of(SpacetimeFamily::minkowski), 0, 0, rs);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(c.t_future[i] == doctest::Approx(rs[i]));
  c = light_cone(of(SpacetimeFamily::coulomb_hydrogen), 0, 0, rs);
  for (std::size_t i = 0; i < rs.size(); ++i)
    CHECK(c.t_future[i] == doctest::Approx(2.0 / 3 * std::pow(rs[i], 1.5)));
  auto h = of(SpacetimeFamily::spectrum_hydrogen);
  h.level = 3;
  c = light_cone(h, 0, 0, rs);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(c.t_future[i] == doctest::Approx(3 * rs[i] * rs[i]));

  // mirror symmetry about t0 is exact
  c = light_cone(of(SpacetimeFamily::schwarzschild), 1.25, 3, {2.5, 3, 4, 9});
  for (std::size_t i = 0; i < c.r.size(); ++i) CHECK(c.t_future[i] + c.t_past[i] == 2 * 1.25);

  CHECK(code_of([] { light_cone(of(SpacetimeFamily::schwarzschild), 0, 1, {3}); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([] { light_cone(rn(2, 1), 0, 0.1, {5}); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("Taylor ratio near the centre") {
  for (auto md : {rn(2, 1), rn(1, 1), rn(1, 2)}) {
    const double q = origin_taylor_ratio(md, 1e-3);
    CHECK(q >= 0.99);
    CHECK(q <= 1.01);
    CHECK(std::abs(origin_taylor_ratio(md, 1e-5) - 1) < std::abs(q - 1));
  }
  CHECK(code_of([] { origin_taylor_ratio(rn(2, 1), 5); }) == ErrorCode::WrongCase);
  CHECK(code_of([] { origin_taylor_ratio(of(SpacetimeFamily::schwarzschild), 3); }) == ErrorCode::WrongCase);
}

TEST_CASE("uncertainty values are exact") {
  CHECK(uncertainty(1, 2) == Rational(7, 8));
  CHECK(uncertainty(1, 3) == Rational(104, 27));
  CHECK(uncertainty(2, 3) == Rational(95, 216));
  for (int a = 1; a <= 12; ++a)
    for (int b = 1; b <= 12; ++b)
      if (a != b) REQUIRE(uncertainty(a, b) == uncertainty(b, a));
  CHECK(code_of([] { uncertainty(3, 3); }) == ErrorCode::EqualLevels);
  const auto j = rational_json(uncertainty(1, 2));
  CHECK(j["num"] == 7);
  CHECK(j["den"] == 8);
}

TEST_CASE("uncertainty minimum by brute force") {
  auto u = uncertainty_minimum(2);
  CHECK(u.value == Rational(7, 8));
  CHECK(u.matches_paper);
  u = uncertainty_minimum(3);
  CHECK(u.value == Rational(95, 216));
  CHECK(u.n1 == 2);
  CHECK(u.n2 == 3);
  CHECK_FALSE(u.matches_paper);

  u = uncertainty_minimum(50);
  CHECK(u.value == uncertainty(u.n1, u.n2));
  for (int a = 1; a <= 50; ++a)
    for (int b = a + 1; b <= 50; ++b) REQUIRE(u.value <= uncertainty(a, b));
  CHECK(u.matches_paper == (u.value == Rational(7, 8) && u.n1 == 1 && u.n2 == 2));
}

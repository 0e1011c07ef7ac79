#include <doctest.h>

#include <cmath>

#include "rcnwave/errors.hpp"
#include "rcnwave/quadratic_forms.hpp"

using namespace rcnwave;

TEST_CASE("Hardy: symbolic values") {
  auto h = hardy_check({1, {1, -1}}, 1);  // tau (1 - tau)
  CHECK(h.lhs == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(h.rhs == doctest::Approx(4.0 / 3).epsilon(1e-9));
  CHECK(h.holds);
  h = hardy_check({1, {1}}, 1);
  CHECK(h.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h.rhs == doctest::Approx(4.0).epsilon(1e-9));
  h = hardy_check({0.51, {1}}, 1);
  CHECK(h.lhs == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(h.rhs == doctest::Approx(52.02).epsilon(1e-6));
  CHECK(h.holds);
}

TEST_CASE("Hardy: leading zero coefficients are absorbed into s") {
  const auto a = hardy_check({0, {0, 1, -1}}, 1), b = hardy_check({1, {1, -1}}, 1);
  CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-12));
  CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-12));
}

TEST_CASE("Hardy: sharpness near s = 1/2") {
  double prev = 0;
  for (double s : {0.75, 0.6, 0.55, 0.51, 0.505}) {
    const auto h = hardy_check({s, {1}}, 1);
    const double ratio = h.lhs / h.rhs;
    CHECK(ratio > prev);
    CHECK(ratio <= 1.0);
    prev = ratio;
  }
  CHECK(prev > 0.9);
}

TEST_CASE("Hardy: preconditions") {
  CHECK_THROWS_AS(hardy_check({0, {1}}, 1), Error);
  try {
    hardy_check({0, {1}}, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProfileViolatesZeroAtOrigin);
  }
  try {
    hardy_check({0.4, {1}}, 1);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegrableAtEndpoint);
  }
}

TEST_CASE("positivity holds on random bumps inside certified windows") {
  struct Case {
    RadialPotential p;
    double lo, hi;
  };
  const std::vector<Case> cases{{power_singular(1, 0.1, 3), 0, 0.5},
                                {power_singular(1, 0.05, 3), 0, 2},
                                {minkowski(3), 0, 0.01},
                                {schwarzschild(1), 2.001, 2.05}};
  for (const auto& c : cases) {
    const auto kind = c.p.kind == PotentialKind::schwarzschild ? WindowKind::infinity_layer : WindowKind::singular_center;
    const auto w = make_window(c.p, c.lo, c.hi, kind);
    const auto cert = certify_window(w);
    REQUIRE(cert.feasible);
    for (const auto& phi : random_bump_family(w, 50, 7)) {
      const auto r = positivity_check(c.p, phi, w, cert.delta);
      REQUIRE(r.holds);
      REQUIRE(r.lhs > 0);
    }
  }
}

TEST_CASE("positivity: named example and support errors") {
  const auto p = power_singular(1, 0.1, 3);
  const auto w = make_window(p, 0, 0.5, WindowKind::singular_center);
  const double d = delta_bound(certify_window(w));
  CHECK(positivity_check(p, bump(0.1, 0.4), w, d).holds);
  CHECK_THROWS_AS(positivity_check(p, bump(0.1, 0.7), w, d), Error);
}

TEST_CASE("positivity falsification beyond the 1D Hardy threshold") {
  const auto bad = positivity_falsify(power_singular(1, 0.6, 1), 0.99, 0, 1, 1000, 11);
  CHECK(bad.found);
  CHECK(bad.lhs > 0.99 * bad.rhs);
  const auto good = positivity_falsify(power_singular(1, 0.4, 1), 0.99, 0, 1, 1000, 11);
  CHECK_FALSE(good.found);
  CHECK(good.trials == 1000);
}

TEST_CASE("nonnegativity boundary at (n-2)^2/4") {
  const double star = 2.25;  // n = 5
  CHECK_FALSE(nonnegativity_falsify(5, 0.9 * star, 1000, 5).found);
  CHECK_FALSE(nonnegativity_falsify(5, 1.0 * star, 1000, 5).found);
  CHECK(nonnegativity_falsify(5, 1.1 * star, 1000, 5).found);
}

TEST_CASE("IMS error term") {
  CutoffFamily one{{0}, {1}, 0.2, -0.8, 0.8, false};
  CHECK(ims_error(one).sup == doctest::Approx(100).epsilon(1e-9));

  CutoffFamily two{{0, 1.5}, {1, 1}, 0.2, -0.8, 2.3, true};
  const auto e = ims_error(two);
  CHECK(e.sup <= 100 * (1 + 1e-9));
  CHECK(e.max_coverage_dev <= 1e-9);

  CutoffFamily flat{{0}, {1e6}, 0.2, -1, 1, true};
  CHECK(ims_error(flat).sup == 0);

  CutoffFamily gap{{0, 5}, {1, 1}, 0.2, -0.8, 5.8, true};
  CHECK_THROWS_AS(ims_error(gap), Error);
}

TEST_CASE("IMS identity balances") {
  CutoffFamily two{{0, 1.5}, {1, 1}, 0.2, -0.8, 2.3, true};
  for (auto phi : {bump(-0.5, 2.0), bump(0.5, 1.2, 2.0, 3), bump_at(0.9, 0.3)}) {
    const auto id = ims_identity(two, phi);
    CHECK(id.rel_err <= 1e-6);
  }
}

TEST_CASE("operator-minorant form") {
  auto p = power_singular(1, 0.5, 3);
  p.v_minus_equals_q = true;
  CHECK(minorant_form_check(p, 0, bump(0.1, 0.4)).holds);
  CHECK(minorant_form_check(p, 0.7, bump(0.1, 0.4)).holds);
  p.v_minus = [q = p](double r) { return 2 * q.q(r); };
  CHECK_FALSE(minorant_form_check(p, 0, bump(0.01, 0.05)).holds);
  p.v_minus = [q = p](double r) { return 0.5 * q.q(r); };
  CHECK(minorant_form_check(p, 0, bump(0.01, 0.05)).holds);
}

TEST_CASE("self-adjointness feasibility") {
  auto s = self_adjointness_feasible(4, 0);
  CHECK(s.feasible);
  CHECK(s.beta_witness == 1);
  CHECK(self_adjointness_feasible(5, 1.25).feasible);
  CHECK(self_adjointness_feasible(5, 1.25).min_value == 0);
  s = self_adjointness_feasible(3, 0);
  CHECK_FALSE(s.feasible);
  CHECK(s.min_value == doctest::Approx(0.75));
  for (int n : {5, 6, 7}) {
    const double edge = (n - 2) * (n - 2) / 4.0 - 1;
    CHECK(self_adjointness_feasible(n, edge).feasible);
    CHECK_FALSE(self_adjointness_feasible(n, std::nextafter(edge, 10.0)).feasible);
  }
  for (int n = 1; n <= 3; ++n) CHECK_FALSE(self_adjointness_feasible(n, 0).feasible);
  for (int n = 4; n <= 9; ++n) CHECK(self_adjointness_feasible(n, 0).feasible);
}

TEST_CASE("profiles vanish at their support ends") {
  for (auto shape : {ProfileShape::polynomial_bump, ProfileShape::gaussian_bump, ProfileShape::piecewise_linear}) {
    TestProfile f;
    f.shape = shape;
    f.a = 0.2, f.b = 0.6;
    CHECK(f.value(0.2) == doctest::Approx(0).epsilon(1e-15));
    CHECK(f.value(0.6) == doctest::Approx(0).epsilon(1e-15));
    CHECK(f.value(0.4) > 0);
    CHECK(f.value(0.1) == 0);
  }
  const auto lb = log_bump(1e-3, 1e-1, -0.5, 3);
  CHECK(lb.value(1e-2) > 0);
  const double h = 1e-8;
  CHECK(lb.deriv(2e-2) == doctest::Approx((lb.value(2e-2 + h) - lb.value(2e-2 - h)) / (2 * h)).epsilon(1e-5));
}

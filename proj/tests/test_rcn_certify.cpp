#include <doctest.h>

#include <cmath>

#include "rcnwave/errors.hpp"
#include "rcnwave/rcn_certify.hpp"

using namespace rcnwave;

TEST_CASE("necessary product for inverse-square potentials is n beta / 8") {
  for (double beta : {0.05, 0.1, 0.2}) {
    const auto w = make_window(power_singular(1, beta, 3), 0, 0.5, WindowKind::singular_center);
    CHECK(necessary_product(w).sup == doctest::Approx(3 * beta / 8).epsilon(1e-6));
  }
  const auto w1 = make_window(power_singular(1, 0.3, 1), 0, 0.5, WindowKind::singular_center);
  CHECK(necessary_product(w1).sup == doctest::Approx(0.3 / 8).epsilon(1e-6));
}

TEST_CASE("necessary product near a flat centre") {
  const auto w = make_window(minkowski(3), 0, 0.01, WindowKind::singular_center);
  const auto np = necessary_product(w);
  CHECK(np.sup == doctest::Approx(0.02).epsilon(1e-3));
  CHECK(np.sup < 1.0 / 16);
  CHECK(np.arg_r > 0.0099);
}

TEST_CASE("certify: inverse-square thresholds") {
  CHECK(certify_window(make_window(power_singular(1, 0.1, 3), 0, 0.5, WindowKind::singular_center)).feasible);
  CHECK_FALSE(certify_window(make_window(power_singular(1, 0.2, 3), 0, 0.5, WindowKind::singular_center)).feasible);
  CHECK_FALSE(certify_window(make_window(power_singular(2, 1, 3), 0, 0.5, WindowKind::singular_center)).feasible);
}

TEST_CASE("certify: log-singular centre") {
  const auto c = certify_window(make_window(log_singular(0.5, 1), 0, 1e-20, WindowKind::singular_center));
  CHECK(c.feasible);
  CHECK(c.necessary_sup < 1.0 / 16);
  // n = 3 needs -ln r > 1296, out of double range: infeasible or empty everywhere
  for (double r0 : {1e-20, 1e-100, 1e-300}) {
    bool feasible = false;
    try {
      feasible = certify_window(make_window(log_singular(0.5, 3), 0, r0, WindowKind::singular_center)).feasible;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroW);
    }
    CHECK_FALSE(feasible);
  }
}

TEST_CASE("certify: Schwarzschild layer off the horizon") {
  const auto p = schwarzschild(1);
  CHECK(certify_window(make_window(p, 2 + 1e-3, 2.05, WindowKind::infinity_layer)).feasible);
  // the horizon end itself: dual grows like |log(r - 2m)|
  CHECK_FALSE(certify_window(make_window(p, 2 + 1e-12, 2.05, WindowKind::infinity_layer)).feasible);
}

TEST_CASE("certify: power-law growth at infinity with shrinking layers") {
  const auto p = power_infinity(0.5, 1, 3);
  for (const auto& w : power_infinity_layers(p, 10, 6, 0.01)) {
    CAPTURE(w.r_lo);
    CHECK(certify_window(w).feasible);
  }
}

TEST_CASE("delta bound formula and errors") {
  RcnCertificate c;
  c.feasible = true;
  c.A = 0.5, c.delta0 = 0.25;
  CHECK(delta_bound(c) == doctest::Approx(1.0 / 3));
  c.delta0 = 0.1;
  CHECK(delta_bound(c) == doctest::Approx(2.0 / 3));
  c.delta0 = 1e-12;
  CHECK(delta_bound(c) < 1.0);
  CHECK(delta_bound(c) > 1 - 1e-11);
  c.feasible = false;
  CHECK_THROWS_AS(delta_bound(c), Error);
}

TEST_CASE("delta shrinks as delta0 grows") {
  double prev = 2;
  for (int i = 1; i < 40; ++i) {
    const double d = delta_from(0.6, 0.01 * i);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("feasible certificates satisfy the necessary 1/16 bound and their own inequalities") {
  std::vector<RcnWindow> ws{
      make_window(power_singular(1, 0.1, 3), 0, 0.5, WindowKind::singular_center),
      make_window(power_singular(1, 0.05, 3), 0, 2, WindowKind::singular_center),
      make_window(power_singular(0.5, 0.05, 3), 0, 0.3, WindowKind::singular_center),
      make_window(minkowski(3), 0, 0.01, WindowKind::singular_center),
      make_window(log_singular(0.5, 1), 0, 1e-20, WindowKind::singular_center),
      make_window(schwarzschild(1), 2.001, 2.05, WindowKind::infinity_layer),
  };
  int feasible = 0;
  for (const auto& w : ws) {
    const auto c = certify_window(w);
    if (!c.feasible) continue;
    ++feasible;
    CHECK(c.necessary_sup < 1.0 / 16);
    CHECK(c.A - c.delta0 > 0);
    CHECK(c.A + c.delta0 < 1);
    CHECK(c.delta == delta_from(c.A, c.delta0));
    CHECK(4 * (1 / (c.C0 * c.C0) + c.eps0 * c.eps0) * c.sup_dual * c.sup_dual < 1 - c.A - c.delta0);
    CHECK(4 * (c.C0 * c.C0 + 1 / (c.eps0 * c.eps0)) * c.sup_qtau * c.sup_qtau < c.A - c.delta0);
  }
  CHECK(feasible >= 5);
}

TEST_CASE("inverse-square verdict does not depend on the window size") {
  for (double beta : {0.1, 0.2}) {
    const bool ref = certify_window(make_window(power_singular(1, beta, 3), 0, 0.5, WindowKind::singular_center)).feasible;
    for (double hi : {1e-4, 0.01, 1.0, 50.0})
      CHECK(certify_window(make_window(power_singular(1, beta, 3), 0, hi, WindowKind::singular_center)).feasible == ref);
  }
}

TEST_CASE("sampled sups are stable under doubling the sample count") {
  const std::vector<RcnWindow> ws{
      make_window(power_singular(1, 0.1, 3), 0, 0.5, WindowKind::singular_center),
      make_window(de_sitter(1), 0.9, 0.95, WindowKind::infinity_layer),
      make_window(schwarzschild(1), 2.01, 2.05, WindowKind::infinity_layer),
  };
  for (const auto& w : ws) {
    SearchConfig a, b;
    a.samples = 256, b.samples = 512;
    const auto ca = certify_window(w, a), cb = certify_window(w, b);
    CHECK(std::abs(ca.sup_dual - cb.sup_dual) <= 1e-4 * cb.sup_dual);
    CHECK(std::abs(ca.sup_qtau - cb.sup_qtau) <= 1e-4 * cb.sup_qtau);
    CHECK(std::abs(ca.necessary_sup - cb.necessary_sup) <= 1e-4 * cb.necessary_sup);
  }
}

TEST_CASE("uniform delta sweeps") {
  const auto s = schwarzschild(1);
  const auto rep = uniform_delta_sweep(s, horizon_layers(s, 4, 10), 0.8);
  CHECK(rep.ok);
  CHECK(rep.A + rep.delta0 == doctest::Approx(0.5));
  CHECK(delta_from(rep.A, rep.delta0) == doctest::Approx(0.8));
  for (const auto& c : rep.certificates) CHECK(c.A == rep.A);

  const auto d = de_sitter(1);
  CHECK(uniform_delta_sweep(d, horizon_layers(d, 3, 12), 0.8).ok);

  const auto ps = power_singular(1, 0.3, 3);
  std::vector<RcnWindow> nested;
  for (double hi : {0.5, 0.1, 0.01}) nested.push_back(make_window(ps, 0, hi, WindowKind::singular_center));
  CHECK_FALSE(uniform_delta_sweep(ps, nested, 0.8).ok);
  CHECK_THROWS_AS(uniform_delta_sweep(ps, nested, 1.0), Error);
}

TEST_CASE("certificate json carries the listed fields") {
  const auto c = certify_window(make_window(power_singular(1, 0.1, 3), 0, 0.5, WindowKind::singular_center));
  const auto j = to_json(c);
  for (const char* k : {"feasible", "constants", "delta", "sup_dual", "sup_qtau", "necessary_sup", "margin", "samples"})
    CHECK(j.contains(k));
  CHECK_FALSE(to_json(c, false).contains("samples"));
}

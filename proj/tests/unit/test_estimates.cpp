#include <doctest.h>

#include <cmath>
#include <random>

#include "hsstokes/estimates.hpp"

using namespace hsstokes;
using namespace hsstokes::estimates;

TEST_CASE("I_mk closed form for m = k = 0") {
  for (double t : {0.25, 1.0, 4.0})
    for (double xn : {0.1, 1.0, 3.0}) {
      const auto c = I_mk(0, 0.0, SpacePoint::planar(2.0 * std::sqrt(t), xn), t);
      CHECK(c.oracle.value == doctest::Approx(2.0 / std::sqrt(t) * (1.0 - std::exp(-xn * xn / (4 * t)))).epsilon(1e-9));
    }
  const auto tiny = I_mk(4, 0.0, SpacePoint::planar(3.0, 1e-4), 1.0);
  CHECK(tiny.oracle.value < 1e-8);
  CHECK(tiny.comparator < 1e-6);
}

TEST_CASE("G_00 is the length of the s-range when min = 1") {
  CHECK(G_ak(0.0, 0.0, 1.0, 1.2).oracle.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("H away from t = 1") {
  for (double a : {-0.5, 0.0, 0.5})
    for (double r : {0.5, 1.0, 2.0}) {
      const auto c = H_ak(a, 1.5, r, 2.0);
      CHECK(c.oracle.value > 0.0);
      CHECK(c.ratio() > 0.0);
      CHECK(std::isfinite(c.ratio()));
    }
}

TEST_CASE("K decreases along |x|") {
  double prev = INFINITY;
  for (double x1 : {2.0, 3.0, 4.0, 6.0}) {
    const double v = K_ak(-0.5, 1.0, SpacePoint::planar(x1, 0.3), 1.05).oracle.value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("A and B at alpha = theta = 0") {
  for (double t : {0.9, 0.99}) {
    const auto ab = AB_integrals(0.0, 0.0, t);
    CHECK(ab.A.oracle.value == doctest::Approx(0.5 - (1.0 - t)).epsilon(1e-12));
    CHECK(ab.B.oracle.value == doctest::Approx(1.0 - t).epsilon(1e-12));
  }
}

TEST_CASE("incomplete gamma") {
  const auto g0 = inc_gamma(0.0, 0.5, 3.0);
  CHECK(g0.oracle.value == doctest::Approx(std::exp(-0.5) - std::exp(-3.0)).epsilon(1e-12));
  const auto g3 = inc_gamma(-2.0, 2.0, 100.0);
  CHECK(g3.lower <= g3.oracle.value);
  CHECK(g3.oracle.value <= g3.upper);
  double prev = 0.0;
  for (double y : {1.5, 2.0, 4.0, 10.0}) {
    const double v = inc_gamma(0.5, 1.0, y).oracle.value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("Lambert W") {
  CHECK(lambert_w(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lambert_w(1e-12) == doctest::Approx(1e-12).epsilon(1e-9));
  CHECK_THROWS(lambert_w(0.0));
  std::vector<double> z;
  for (int k = 0; k <= 48; ++k) z.push_back(std::pow(10.0, -6.0 + k * 0.25));
  const auto [lo, hi] = lambert_band(z);
  CHECK(lo > 0.0);
  CHECK(hi / lo < 1e3);
}

TEST_CASE("root brackets for theta^a ln theta") {
  const auto r = h_root_brackets(0.5, 0.1);
  CHECK(r.case_index == 1);
  CHECK(r.root_exists);
  CHECK(r.contains_root());
  CHECK(std::pow(r.root, 0.5) * std::log(r.root) == doctest::Approx(-0.1).epsilon(1e-10));
  const double aM = 0.5 * 0.1;
  CHECK(r.theta2 == doctest::Approx(std::pow(aM, 2.0) * std::pow(std::log(1.0 / aM), -2.0)).epsilon(1e-14));
}

TEST_CASE("power-log inequalities") {
  CHECK(power_log_bounds(1.0, 2.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ue(1e-3, 3.0), ux(1e-9, 6.0);
  for (int k = 0; k < 2000; ++k) CHECK(power_log_bounds(ue(rng), std::pow(10.0, ux(rng))));
  CHECK(power_log_bounds(0.5, 1.0 + 1e-9));
}

TEST_CASE("band bookkeeping") {
  BandReport b("demo", "grid");
  b.add(2.0, 1.0, "p1");
  b.add(3.0, 1.0, "p2");
  CHECK(b.spread() == doctest::Approx(1.5));
  CHECK(b.passed());
  b.add(-1.0, 1.0, "p3");
  CHECK_FALSE(b.sign_agreement);
  CHECK_FALSE(b.passed());
}

#include <doctest.h>

#include <cmath>

#include "hsstokes/reversal.hpp"
#include "hsstokes/suites.hpp"

using namespace hsstokes;
using namespace hsstokes::reversal;

namespace {

// Exact synthetic field with a tiny error bar.
FieldProbe synthetic(std::function<double(double, double)> w) {
  return [w](double xn, double t, const quad::QuadSpec&) { return EvalResult{w(xn, t), 1e-15, 1}; };
}

std::vector<SignedSample> signs(std::initializer_list<int> s) {
  std::vector<SignedSample> v;
  double x = 1.0;
  for (int k : s) v.push_back({x++, double(k), 0.0, k});
  return v;
}

const auto grid = suites::logspace(1e-2, 50.0, 24);

}  // namespace

TEST_CASE("intervals of signed sequences") {
  CHECK(intervals_of(signs({1, 1, 1, 1})).empty());
  const auto one = intervals_of(signs({-1, -1, 1, 1, 1}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].kind == IntervalKind::minus_plus);
  CHECK(one[0].y1 == 2.0);
  CHECK(one[0].y2 == 3.0);
  CHECK(one[0].lo == 1.0);
  CHECK(one[0].hi == 5.0);
  const auto two = intervals_of(signs({1, -1, 0, -1, 1}));
  REQUIRE(two.size() == 2);
  CHECK(two[0].kind == IntervalKind::plus_minus);
  CHECK(two[1].kind == IntervalKind::minus_plus);
  CHECK(two[1].y1 == 4.0);
}

TEST_CASE("scan of a synthetic field") {
  ScanOptions opt;
  const auto r = sign_scan(synthetic([](double x, double) { return x - 3.0; }), 1.0, grid, opt);
  CHECK(r.pattern() == std::vector<int>{-1, 1});
  const auto c = sign_scan(synthetic([](double, double) { return 2.0; }), 1.0, grid, opt);
  CHECK(c.intervals.empty());
  CHECK_THROWS_AS(sign_scan(synthetic([](double x, double) { return x; }), 1.0, {1.0, 2.0}, opt),
                  std::invalid_argument);
}

TEST_CASE("unsignable samples are refused") {
  ScanOptions opt;
  FieldProbe noisy = [](double, double, const quad::QuadSpec&) { return EvalResult{1e-3, 1.0, 1}; };
  CHECK_THROWS_AS(signed_sample(noisy, 1.0, 1.0, opt), IndeterminateRegion);
}

TEST_CASE("locate a synthetic zero") {
  ScanOptions opt;
  const auto f = synthetic([](double x, double) { return x - 3.0; });
  const auto z = locate_zero(f, 1.0, 1.0, 5.0, opt);
  CHECK(z.x_n_star == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(z.lo <= z.x_n_star);
  CHECK(z.x_n_star <= z.hi);
  const auto narrow = locate_zero(f, 1.0, 2.5, 3.2, opt);
  CHECK(narrow.x_n_star == doctest::Approx(z.x_n_star).epsilon(1e-3));
  CHECK_THROWS(locate_zero(f, 1.0, 4.0, 5.0, opt));
}

TEST_CASE("reversal points of a moving zero") {
  ScanOptions opt;
  const auto f = synthetic([](double x, double t) { return x - 3.0 * t; });
  const auto z = locate_zero(f, 1.05, 1.0, 10.0, opt);
  const auto v = classify_reversal(f, z, {1.02, 1.06, 1.10}, opt);
  CHECK(v.is_reversal);
  REQUIRE(v.rows.size() == 3);
  CHECK(v.rows[2].h == doctest::Approx(3.3).epsilon(1e-3));

  const auto flat = synthetic([](double, double) { return 1.0; });
  CHECK_FALSE(classify_reversal(flat, {0, {0.0}, 1.05, 3.0}, {1.02, 1.10}, opt).is_reversal);
}

TEST_CASE("separation on synthetic layers") {
  ScanOptions opt;
  SeparationWindows w;
  w.t_before = {0.9, 0.99};
  for (double s : suites::logspace(1e-5, 1e-2, 7)) w.t_after.push_back(1.0 + s);
  w.xn_grid = suites::logspace(1e-3, 40.0, 24);
  // reversed layer of thickness (t - 1)^0.3 after t = 1, positive before
  const auto shrinking = synthetic([](double x, double t) { return t < 1.0 ? 1.0 : x - std::pow(t - 1.0, 0.3); });
  const auto s = classify_separation(shrinking, w, opt);
  CHECK(s.positive_before);
  CHECK(s.reversed_after);
  CHECK(s.beta_monotone);
  CHECK(s.limit_check);
  CHECK(s.holds);
  // layer with a positive limit
  const auto stuck = synthetic([](double x, double t) { return t < 1.0 ? 1.0 : x - 1.0 - (t - 1.0); });
  const auto k = classify_separation(stuck, w, opt);
  CHECK_FALSE(k.limit_check);
  CHECK_FALSE(k.holds);
  // a vanishing profile evaluates to an exact zero with no error
  const FieldProbe none = [](double, double, const quad::QuadSpec&) { return EvalResult{}; };
  CHECK_FALSE(classify_separation(none, w, opt).holds);
}

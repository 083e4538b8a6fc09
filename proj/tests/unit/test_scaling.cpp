#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hsstokes/boundary.hpp"
#include "hsstokes/scaling.hpp"

using namespace hsstokes;
using namespace hsstokes::scaling;

namespace {

bool has(const std::vector<RegionLabel>& v, Family f, int i) {
  return std::any_of(v.begin(), v.end(), [&](const RegionLabel& l) { return l.family == f && l.index == i; });
}

RegionParams params(double a, double r, double t) { return {a, r, t, 2, BoundaryProfile(2, a).mass()}; }

}  // namespace

TEST_CASE("region membership") {
  const double a = -0.75, s = 1e-4;
  const double r = std::sqrt(std::pow(s, a + 0.5) / (2.0 * std::abs(a + 0.5)));
  CHECK(has(region_classify(params(a, r, 1.0 + s)), Family::A, 1));
  CHECK(has(region_classify(params(0.6, 40.0, 1.01)), Family::B, 1));
  for (const auto& l : region_classify(params(-0.5, 3.0, 1.05))) {
    CHECK((l.family == Family::A || l.family == Family::B));
    CHECK(l.name().size() == 2);
  }
  CHECK(region_classify(params(-0.5, 3.0, 0.2)).empty());
  CHECK(region_classify(params(-0.5, 3.0, 1.0)).empty());
}

TEST_CASE("predicted zeros") {
  {
    const double r = 20.0, t = 1.01;
    const RegionLabel a2{Family::A, 2, {}};
    CHECK(predicted_zero(params(-0.5, r, t), ZeroKind::tangential, a2) ==
          doctest::Approx(r / std::sqrt(std::log(r * r / (t - 1.0)))).epsilon(1e-14));
  }
  {
    const double a = 0.25, r = 3.0;
    const RegionLabel b2{Family::B, 2, {}};
    CHECK(predicted_zero(params(a, r, 1.01), ZeroKind::normal, b2) ==
          doctest::Approx(std::pow((1.0 - 2.0 * a) * std::exp(-r * r), 1.0 / (2.0 * a))).epsilon(1e-12));
  }
  {
    const RegionLabel c1{Family::C, 1, {}};
    CHECK(predicted_zero(params(0.5, 8.0, 0.95), ZeroKind::tangential, c1) ==
          doctest::Approx(std::sqrt(std::log(8.0))).epsilon(1e-14));
  }
  CHECK(predicted_zero(params(0.5, 7.0, 1.4), ZeroKind::normal_far, std::nullopt) == doctest::Approx(7.0));
  CHECK_THROWS_AS(predicted_zero(params(-0.5, 8.0, 0.95), ZeroKind::tangential, RegionLabel{Family::C, 1, {}}),
                  NoBranch);
}

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> s;
  for (int k = 0; k <= 8; ++k) {
    const double x = std::pow(10.0, -6.0 + 0.5 * k);
    s.emplace_back(x, 7.0 * std::pow(x, 0.3));
  }
  const auto fit = fit_exponent(s, Sweep::t_minus_1);
  CHECK(std::abs(fit.exponent - 0.3) < 1e-12);
  CHECK(std::exp(fit.intercept) == doctest::Approx(7.0).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.range.first == doctest::Approx(1e-6));

  // a known log factor is removed before fitting
  std::vector<std::pair<double, double>> l;
  for (auto [x, y] : s) l.emplace_back(x, y / std::sqrt(std::abs(std::log(x))));
  const auto corr = fit_exponent(l, Sweep::t_minus_1, [](double x) { return std::sqrt(std::abs(std::log(x))); });
  CHECK(std::abs(corr.exponent - 0.3) < 1e-12);

  std::vector<std::pair<double, double>> narrow(s.begin(), s.begin() + 6);
  CHECK_THROWS_AS(fit_exponent(narrow, Sweep::t_minus_1), InsufficientSpan);
  std::vector<std::pair<double, double>> few(s.begin(), s.begin() + 3);
  CHECK_THROWS_AS(fit_exponent(few, Sweep::t_minus_1, {}, 0.5), InsufficientSpan);
}

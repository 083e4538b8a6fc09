#include <doctest.h>

#include <cmath>

#include "hsstokes/quadrature.hpp"

using namespace hsstokes;
using namespace hsstokes::quad;

TEST_CASE("endpoint singularities") {
  QuadSpec q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-14;
  const auto r = integrate_1d([](double s) { return 1.0 / std::sqrt(s); }, 0.0, 1.0,
                              q.with_singularity(Endpoint::lower, -0.5));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(r.error_estimate < 1e-10);

  // 1 - s is rounded near s = 1, which caps the reachable accuracy
  QuadSpec up = q;
  up.rel_tol = 1e-9;
  const auto r2 = integrate_1d([](double s) { return std::pow(1.0 - s, -0.75); }, 0.5, 1.0,
                               up.with_singularity(Endpoint::upper, -0.75));
  CHECK(r2.value == doctest::Approx(4.0 * std::pow(0.5, 0.25)).epsilon(1e-8));
  CHECK_THROWS_AS(integrate_1d([](double s) { return std::pow(1.0 - s, -0.75); }, 0.5, 1.0,
                               q.with_singularity(Endpoint::upper, -0.75)),
                  NonConvergence);

  const auto r3 = integrate_1d([](double s) { return std::exp(-s); }, 0.0, 1.0, q);
  CHECK(r3.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("reversed limits and breakpoints") {
  const auto r = integrate_1d([](double s) { return s * s; }, 2.0, 0.0);
  CHECK(r.value == doctest::Approx(-8.0 / 3.0));
  const double pts[] = {-1.0, 0.0, 1.0};
  const auto k = integrate_1d([](double s) { return std::abs(s); }, std::span<const double>(pts));
  CHECK(k.value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("budget exhaustion") {
  QuadSpec q;
  q.max_panels = 3;
  q.rel_tol = 1e-14;
  q.abs_tol = 1e-300;
  auto wild = [](double s) { return std::sin(1.0 / (s + 1e-4)); };
  CHECK_THROWS_AS(integrate_1d(wild, 0.0, 1.0, q), NonConvergence);
  const auto r = integrate_1d(wild, 0.0, 1.0, q.lenient());
  CHECK(r.error_estimate > 0.0);
  CHECK_THROWS_AS(integrate_1d([](double) { return NAN; }, 0.0, 1.0), EvaluationFailure);
}

TEST_CASE("magnitude-relative tolerance terminates on a cancelling integrand") {
  QuadSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-8;
  q.rel_to = RelativeTo::magnitude;
  const auto r = integrate_1d([](double s) { return std::sin(s); }, -3.0, 3.0, q);
  CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("tangential balls") {
  auto one = [](std::span<const double>) { return 1.0; };
  CHECK(integrate_disk(one, 0.5, 2).value == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
  CHECK(integrate_disk(one, 0.5, 1).value == doctest::Approx(1.0).epsilon(1e-12));
  QuadSpec q;
  q.abs_tol = 1e-13;
  auto odd = [](std::span<const double> y) { return y[0] * std::exp(-y[0] * y[0]); };
  CHECK(std::abs(integrate_disk(odd, 0.7, 2, q).value) < 1e-12);
  CHECK(std::abs(integrate_disk(odd, 0.7, 1, q).value) < 1e-12);
}

TEST_CASE("principal value by antisymmetrisation") {
  QuadSpec q;
  q.rel_tol = 1e-11;
  q.abs_tol = 1e-13;
  // p.v. int e^{-(z-1)^2} / z dz = 2 sqrt(pi) e^{-1} int_0^1 e^{u^2} du
  auto f = [](std::span<const double> z) { return std::exp(-(z[0] - 1.0) * (z[0] - 1.0)) / z[0]; };
  const double at[1] = {0.0};
  const auto pv = integrate_pv_antisym(f, std::span<const double>(at), 14.0, q);
  const double dawson = integrate_1d([](double u) { return std::exp(u * u); }, 0.0, 1.0, q).value;
  CHECK(pv.value == doctest::Approx(2.0 * std::sqrt(M_PI) * std::exp(-1.0) * dawson).epsilon(1e-9));

  // the same value from excised integrals, extrapolated in eps
  auto g = [](double z) { return std::exp(-(z - 1.0) * (z - 1.0)) / z; };
  auto excised = [&](double eps) {
    return integrate_1d(g, -14.0, -eps, q).value + integrate_1d(g, eps, 14.0, q).value;
  };
  const double e1 = excised(1e-2), e2 = excised(1e-3);
  const double extrapolated = e2 + (e2 - e1) / 9.0;
  CHECK(pv.value == doctest::Approx(extrapolated).epsilon(1e-6));

  auto odd = [](std::span<const double> z) { return z[0] / (z[0] * z[0] + z[1] * z[1]) * std::exp(-z[0] * z[0] - z[1] * z[1]); };
  const double origin[2] = {0.0, 0.0};
  CHECK(std::abs(integrate_pv_antisym(odd, std::span<const double>(origin), 6.0, q).value) < 1e-14);
}

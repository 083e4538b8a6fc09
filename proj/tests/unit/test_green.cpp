#include <doctest.h>

#include <cmath>

#include "hsstokes/green.hpp"
#include "hsstokes/kernels.hpp"

using namespace hsstokes;
using namespace hsstokes::green;

namespace {

quad::QuadSpec tight() {
  quad::QuadSpec q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-14;
  return q;
}

double dn_gamma(const SpacePoint& x, double t) {
  std::array<double, 3> s;
  return kernels::heat_kernel_dn(x.as_span(s), t);
}

}  // namespace

TEST_CASE("trace of L is half the normal heat derivative") {
  for (const auto& [x, t] : {std::pair{SpacePoint::planar(0.7, 0.4), 0.8}, std::pair{SpacePoint::planar(-1.2, 1.1), 1.7},
                             std::pair{SpacePoint::spatial(0.5, -0.3, 0.6), 0.5}}) {
    double tr = 0.0;
    for (int i = 1; i <= x.dim; ++i) tr += L_ij({i, i, x, t}, tight()).value;
    CHECK(tr == doctest::Approx(0.5 * dn_gamma(x, t)).epsilon(1e-8));
  }
}

TEST_CASE("L against a finite difference of the slab integral") {
  const auto x = SpacePoint::planar(0.6, 0.5);
  const double t = 0.9, h = 1e-4;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      auto shifted = [&](double d) {
        SpacePoint y = x;
        if (j == 1) y.xp[0] += d;
        else y.xn += d;
        return slab_potential(i, y, t, tight()).value;
      };
      const double fd = (shifted(h) - shifted(-h)) / (2 * h);
      CHECK(L_ij({i, j, x, t}, tight()).value == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("heat-time and physical-space routes agree") {
  const auto x = SpacePoint::planar(0.9, 0.3);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      CHECK(L_ij({i, j, x, 0.7}, tight()).value ==
            doctest::Approx(L_ij_physical({i, j, x, 0.7}, tight()).value).epsilon(1e-6));
  CHECK(B_in(1, x, 0.7, tight()).value == doctest::Approx(B_in_heat_time(1, x, 0.7, tight()).value).epsilon(1e-7));
}

TEST_CASE("tangential symmetry, n = 3") {
  const auto x = SpacePoint::spatial(0.4, 0.9, 0.7);
  const double a = L_ij({1, 2, x, 0.6}, tight()).value, b = L_ij({2, 1, x, 0.6}, tight()).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
  CHECK(L_tilde_ij({1, 2, x, 0.6}, tight()).value == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("L~ diagonal normal entry") {
  const auto x = SpacePoint::planar(0.3, 0.8);
  const double t = 1.3;
  const double lnn = L_ij({2, 2, x, t}, tight()).value;
  CHECK(L_tilde_ij({2, 2, x, t}, tight()).value == doctest::Approx(lnn - dn_gamma(x, t) / 4.0).epsilon(1e-10));
}

TEST_CASE("L~ against the shrinking half ball") {
  quad::QuadSpec q;
  q.rel_tol = 1e-8;
  q.abs_tol = 1e-12;
  for (const auto& x : {SpacePoint::planar(0.5, 0.6), SpacePoint::planar(-0.8, 0.3)})
    for (int i = 1; i <= 2; ++i) {
      const TensorQuery tq{i, 2, x, 0.9};
      const auto id = L_tilde_ij(tq, q);
      const auto e1 = L_tilde_ball(tq, 1e-1, q), e2 = L_tilde_ball(tq, 1e-2, q), e0 = L_tilde_ball(tq, 0.0, q);
      CHECK(e0.value == doctest::Approx(id.value).epsilon(1e-6));
      // the excised values approach the limit monotonically in eps
      CHECK(std::abs(e2.value - id.value) <= std::abs(e1.value - id.value) + 3 * (e1.error_estimate + e2.error_estimate));
    }
}

TEST_CASE("B_in signs") {
  CHECK(B_in(1, SpacePoint::spatial(10.0, 0.0, 1.0), 0.5).value < 0.0);
  CHECK(B_in(1, SpacePoint::planar(10.0, 1.0), 0.5).value < 0.0);
  CHECK(std::abs(B_in(1, SpacePoint::planar(0.0, 1.0), 0.5).value) < 1e-12);
}

TEST_CASE("B_in follows its Gaussian comparator") {
  double lo = INFINITY, hi = 0.0;
  for (double x1 : {4.0, 8.0, 16.0, 32.0})
    for (double xn : {0.1, 0.5, 2.0})
      for (double t : {0.1, 0.3, 1.0}) {
        const double b = B_in(1, SpacePoint::planar(x1, xn), t, tight()).value;
        // Gaussian constant 1/4, the one the heat kernel carries
        const double c = -std::pow(t, -1.5) * std::exp(-xn * xn / (4.0 * t)) * x1 * xn / (x1 * x1);
        CHECK(b < 0.0);
        lo = std::min(lo, b / c);
        hi = std::max(hi, b / c);
      }
  CHECK(hi / lo < 1e3);
}

TEST_CASE("regular kernel") {
  const auto x = SpacePoint::spatial(0.8, -0.4, 0.5);
  CHECK(K_ij_regular({1, 2, x, 0.7}, tight()).value ==
        doctest::Approx(4.0 * L_ij({1, 2, x, 0.7}, tight()).value).epsilon(1e-12));
  const auto far = SpacePoint::planar(1.0, 20.0);
  const double l11 = L_ij({1, 1, far, 1.0}, tight()).value;
  CHECK(std::abs(2.0 * dn_gamma(far, 1.0)) < 1e-3 * std::abs(4.0 * l11));
  CHECK(std::isfinite(K_ij_regular({2, 2, SpacePoint::planar(-0.3, 0.2), 0.4}).value));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "hsstokes/kernels.hpp"

using namespace hsstokes;
using namespace hsstokes::kernels;

TEST_CASE("heat kernel normalisation and causality") {
  const double o[2] = {0.0, 0.0};
  CHECK(heat_kernel(o, 1.0 / (4.0 * M_PI)) == doctest::Approx(1.0).epsilon(1e-15));
  const double x[3] = {0.3, -0.2, 0.7};
  CHECK(heat_kernel(x, -1.0) == 0.0);
  CHECK(heat_kernel(x, 0.0) == 0.0);
  CHECK_THROWS_AS(heat_kernel_dn(x, -1.0), DomainError);
  CHECK_THROWS_AS(heat_kernel_dn(x, 0.0), DomainError);
}

TEST_CASE("heat kernel is even and factorises") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ut(0.05, 4.0);
  for (int k = 0; k < 100; ++k) {
    const double x[3] = {u(rng), u(rng), std::abs(u(rng))};
    const double mx[3] = {-x[0], -x[1], -x[2]};
    const double t = ut(rng);
    CHECK(heat_kernel(x, t) == doctest::Approx(heat_kernel(mx, t)).epsilon(1e-15));
    if (k < 50) {
      const double prod = heat_kernel_1d(x[2], t) * heat_kernel_prime(std::span<const double>(x, 2), t);
      CHECK(std::abs(heat_kernel(x, t) - prod) <= 1e-14 * heat_kernel(x, t));
    }
  }
}

TEST_CASE("normal derivative of the heat kernel") {
  const double wall[2] = {0.4, 0.0};
  CHECK(heat_kernel_dn(wall, 0.7) == 0.0);
  for (double xn : {1e-3, 0.1, 1.0, 5.0})
    for (double t : {0.01, 0.5, 3.0}) {
      const double x[2] = {0.2, xn};
      CHECK(heat_kernel_dn(x, t) < 0.0);
    }
  // central difference in x_n
  const double h = 1e-5;
  const double xp[3] = {0.3, 0.1, 0.8 + h}, xm[3] = {0.3, 0.1, 0.8 - h}, x0[3] = {0.3, 0.1, 0.8};
  const double fd = (heat_kernel(xp, 0.6) - heat_kernel(xm, 0.6)) / (2 * h);
  CHECK(heat_kernel_dn(x0, 0.6) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("Newtonian potential") {
  const double e2[2] = {0.6, 0.8}, e3[3] = {0.0, 0.6, 0.8};
  CHECK(std::abs(newton_kernel(e2)) < 1e-15);
  CHECK(newton_kernel(e3) == doctest::Approx(-1.0 / (4.0 * M_PI)).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int dim : {2, 3})
    for (int k = 0; k < 20; ++k) {
      double x[3] = {u(rng), u(rng), u(rng)};
      const std::span<const double> xs(x, dim);
      const Mat h = newton_hess(xs);
      double tr = 0.0;
      for (int i = 0; i < dim; ++i) tr += h[i][i];
      CHECK(std::abs(tr) < 1e-12 * (1.0 + std::abs(h[0][0])));
      // gradient against central differences of N
      const Vec g = newton_grad(xs);
      for (int i = 0; i < dim; ++i) {
        const double step = 1e-6;
        double p[3] = {x[0], x[1], x[2]}, m[3] = {x[0], x[1], x[2]};
        p[i] += step;
        m[i] -= step;
        const double fd = (newton_kernel(std::span<const double>(p, dim)) - newton_kernel(std::span<const double>(m, dim))) /
                          (2 * step);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
}

TEST_CASE("SpacePoint rejects bad input") {
  CHECK_THROWS_AS(SpacePoint::planar(1.0, -0.1), DomainError);
  const double o[2] = {0.0, 0.0};
  CHECK_THROWS_AS(newton_kernel(o), DomainError);
  const double four[3] = {1, 2, 3};
  CHECK_THROWS_AS(SpacePoint::make(four, 1.0), DomainError);
}

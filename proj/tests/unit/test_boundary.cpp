#include <doctest.h>

#include <cmath>

#include "hsstokes/boundary.hpp"
#include "hsstokes/kernels.hpp"
#include "hsstokes/quadrature.hpp"

using namespace hsstokes;

TEST_CASE("psi: support, symmetry, unit mass") {
  for (int n : {2, 3}) {
    const BoundaryProfile p(n, -0.5);
    CHECK(p.psi_radial(0.5) == 0.0);
    CHECK(p.psi_radial(0.6) == 0.0);
    CHECK(p.psi_radial(0.1) > 0.0);
    const double y[2] = {0.13, -0.21}, my[2] = {-0.13, 0.21};
    CHECK(p.psi(std::span<const double>(y, n - 1)) == p.psi(std::span<const double>(my, n - 1)));
    quad::QuadSpec q;
    q.rel_tol = 1e-10;
    const auto m = quad::integrate_disk([&](std::span<const double> z) { return p.psi(z); }, 0.5, n - 1, q);
    CHECK(m.value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("psi derivatives") {
  const BoundaryProfile p(3, 0.0);
  const double r = 0.27, h = 1e-6;
  const auto jet = p.psi_radial_jet(r);
  CHECK(jet[0] == doctest::Approx(p.psi_radial(r)));
  CHECK(jet[1] == doctest::Approx((p.psi_radial(r + h) - p.psi_radial(r - h)) / (2 * h)).epsilon(1e-6));
  CHECK(jet[2] == doctest::Approx((p.psi_radial(r + h) - 2 * jet[0] + p.psi_radial(r - h)) / (h * h)).epsilon(1e-4));
}

TEST_CASE("phi") {
  for (double a : {-0.5, 0.0, 0.5}) {
    const BoundaryProfile p(2, a);
    CHECK(p.phi(0.75) == doctest::Approx(std::pow(0.25, a)).epsilon(1e-15));
    CHECK(p.phi(0.1) == 0.0);
    CHECK(p.phi(1.0) == 0.0);
    CHECK(p.phi(1.5) == 0.0);
    CHECK(p.phi_from_end(0.25) == doctest::Approx(p.phi(0.75)).epsilon(1e-15));
  }
  CHECK(BoundaryProfile(2, -0.5).phi(1.0 - 1e-12) > 1e5);
  CHECK(BoundaryProfile(2, 0.5).phi(1.0 - 1e-12) < 1e-5);
  CHECK(BoundaryProfile(2, 0.5).phi_from_end(1e-300) == doctest::Approx(1e-150));
}

TEST_CASE("ramp mass") {
  const BoundaryProfile flat(2, 0.0);
  CHECK(flat.mass() > 0.0);
  CHECK(flat.mass() < 0.25);
  double prev = INFINITY;
  for (double a : {-0.9, -0.5, 0.0, 0.5, 1.0}) {
    const double m = BoundaryProfile(2, a).mass();
    CHECK(m > 0.0);
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(BoundaryProfile(2, -1.0), DomainError);
  CHECK_THROWS_AS(BoundaryProfile(4, 0.0), DomainError);
  CHECK(BoundaryProfile(2, 1.5).untested());
  CHECK_FALSE(BoundaryProfile(2, 1.0).untested());
}

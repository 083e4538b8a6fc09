#include <doctest.h>

#include <cmath>

#include "hsstokes/reversal.hpp"
#include "hsstokes/velocity.hpp"

using namespace hsstokes;
using namespace hsstokes::velocity;

namespace {

VelocityQuery query(int comp, double x1, double xn, double t, double a) {
  VelocityQuery q;
  q.component = comp;
  q.x = SpacePoint::planar(x1, xn);
  q.t = t;
  q.profile = BoundaryProfile(2, a);
  q.quad.rel_tol = 1e-8;
  q.quad.abs_tol = 1e-12;
  return q;
}

}  // namespace

TEST_CASE("causality: nothing happens before the influx starts") {
  for (int c : {1, 2}) {
    const auto s = w_component(query(c, 0.7, 0.4, 0.2, -0.5));
    CHECK(std::abs(s.value) < 1e-12);
  }
}

TEST_CASE("piece signs") {
  CHECK(w_part(Piece::G, 2, 2, query(2, 3.0, 0.5, 1.2, -0.5)).value >= 0.0);
  CHECK(w_part(Piece::G, 2, 2, query(2, 0.1, 2.0, 0.9, 0.5)).value >= 0.0);
  CHECK(w_part(Piece::N, 2, 2, query(2, 2.0, 0.5, 0.8, -0.5)).value > 0.0);
  CHECK(w_part(Piece::N, 2, 2, query(2, -3.0, 0.1, 0.6, 0.5)).value > 0.0);
  CHECK(w_part(Piece::B, 1, 2, query(1, 20.0, 1.0, 2.0, -0.5)).value < 0.0);
}

TEST_CASE("tangential velocity vanishes at the wall off the support") {
  const double near = std::abs(w_component(query(1, 3.0, 1e-4, 1.5, -0.5)).value);
  const double mid = std::abs(w_component(query(1, 3.0, 0.5, 1.5, -0.5)).value);
  CHECK(near < 1e-2 * mid);
}

TEST_CASE("the untilded w_n sum differs from w_n by w^G") {
  const auto q = query(2, 1.5, 0.6, 1.3, -0.5);
  const auto wn = w_normal(q), with_g = w_normal_untilded_with_wg(q);
  const auto g = w_part(Piece::G, 2, 2, q);
  CHECK(with_g.value - wn.value == doctest::Approx(g.value).epsilon(1e-5));
  CHECK(w_normal_untilded(q).value == doctest::Approx(wn.value).epsilon(1e-6));
}

TEST_CASE("sign before and after t = 1 at a = -0.6") {
  // negative at the wall then positive, as the scan finds
  const auto below = w_component(query(1, 20.0, 1e-3, 1.02, -0.6));
  const auto above = w_component(query(1, 20.0, 15.0, 1.02, -0.6));
  CHECK(below.value < 0.0);
  CHECK(above.value > 0.0);
}

TEST_CASE("zero amplitude gives zero velocity") {
  auto q = query(1, 2.0, 0.3, 1.1, -0.5);
  q.profile = BoundaryProfile(2, -0.5, 0.0);
  CHECK(w_component(q).value == 0.0);
  q.component = 2;
  CHECK(w_component(q).value == 0.0);
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hsstokes/parallel.hpp"
#include "hsstokes/suites.hpp"

using namespace hsstokes;

TEST_CASE("parallel_for writes by index") {
  std::vector<double> one(257), eight(257);
  auto body = [](std::vector<double>& out) {
    return [&out](std::size_t i) { out[i] = std::sin(double(i)) * std::exp(-1e-3 * double(i)); };
  };
  parallel_for(one.size(), 1, body(one));
  parallel_for(eight.size(), 8, body(eight));
  CHECK(one == eight);
}

TEST_CASE("parallel_for rethrows the smallest failing index") {
  for (int th : {1, 4}) {
    try {
      parallel_for(100, th, [](std::size_t i) {
        if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "7");
    }
  }
}

TEST_CASE("seeded points are reproducible") {
  suites::PointSource a(42), b(42);
  for (int k = 0; k < 10; ++k) {
    const double u = a.uniform(-1.0, 2.0);
    CHECK(u == b.uniform(-1.0, 2.0));
    CHECK(u >= -1.0);
    CHECK(u < 2.0);
  }
  const auto g = suites::logspace(1e-3, 10.0, 5);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 10.0);
  CHECK(g[2] == doctest::Approx(0.1));
}

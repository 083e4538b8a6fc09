// Integral quantities from the asymptotic analysis, each with a quadrature
// oracle and the piecewise closed form it is claimed to be comparable to.
// "Comparable" means a bounded positive ratio; BandReport collects the ratio
// range over a grid.
//
// Unnamed constants c inside Gaussian comparators are 1/4 throughout.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsstokes/kernels.hpp"
#include "hsstokes/quadrature.hpp"

namespace hsstokes::estimates {

inline constexpr double kGaussC = 0.25;

struct Comparison {
  EvalResult oracle;
  double comparator = 0.0;
  double ratio() const { return oracle.value / comparator; }
};

// Thrown when parameters sit on a case boundary and the two neighbouring
// branches disagree by more than the band allows.
class AmbiguousBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BandReport {
  BandReport() = default;
  BandReport(std::string n, std::string g) : name(std::move(n)), grid(std::move(g)) {}

  std::string name;
  std::string grid;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool sign_agreement = true;
  std::string worst_point;
  int samples = 0;
  // two_sided: oracle ~ comparator, ratio spread below spread_limit.
  // upper_bound: only oracle <= C comparator is claimed; max_ratio is checked.
  // sandwich: explicit bounds lower <= oracle <= upper; ratios are oracle/lower
  // and every sample must lie inside. The spread is recorded, not checked.
  enum class Kind { two_sided, upper_bound, sandwich };
  Kind kind = Kind::two_sided;
  double spread_limit = 1e3;
  bool inside = true;

  void add(double oracle, double comparator, const std::string& point);
  void add_sandwich(double oracle, double lower, double upper, const std::string& point);
  double spread() const { return kind == Kind::upper_bound ? max_ratio : max_ratio / min_ratio; }
  bool passed() const;

 private:
  std::string min_point_, max_point_;
};

// int_0^{x_n} (x_n - z)/t^{3/2} e^{-(x_n - z)^2/4t} z^k / (|x'|^2 + z^2)^{m/2} dz
// against t^{-1/2} x_n^k |x|^{-m} min(1, x_n^2/t). Needs |x'| >= sqrt(t).
Comparison I_mk(int m, double k, const SpacePoint& x, double t, const quad::QuadSpec& spec = {});

// Integrals over s in (1/2, 1) of (1 - s)^a (t - s)^{-k} times
//   G: min(1, x_n^2/(t - s))
//   H: exp(-r^2 / 4(t - s))
//   K: exp(-c|x|^2 / (t - s)) min(1, x_n^2/(t - s))
// Need t > 1, a > -1, k >= 0 (and |x'| >= 2 for K).
Comparison G_ak(double a, double k, double xn, double t, const quad::QuadSpec& spec = {});
Comparison H_ak(double a, double k, double r, double t, const quad::QuadSpec& spec = {});
Comparison K_ak(double a, double k, const SpacePoint& x, double t, const quad::QuadSpec& spec = {});

// Closed forms alone, for callers that only need the case tree.
double G_ak_comparator(double a, double k, double xn, double t);
double H_ak_comparator(double a, double k, double r, double t);
double K_ak_comparator(double a, double k, const SpacePoint& x, double t);

// K_{a,(n+2)/2}(x, t) against (x_n/|x|^{n+2}) G_{a,1/2}(x_n, t); only the
// upper bound is claimed. Needs 1 < t < 9/8 and either
// sqrt(2(t-1)) <= x_n < 1/2 with a <= 0, or 1/2 <= x_n <= |x'|.
Comparison K_over_G(double a, const SpacePoint& x, double t, const quad::QuadSpec& spec = {});

// A = int_{1-t}^{upper} s^alpha e^{-theta^2/4s} ds, B = int_0^{1-t} (same);
// 7/8 < t < 1. The comparator for A assumes upper = 1/2; the (theta >= 1/2)
// branch is also meant to hold for any upper > 1/8.
struct ABComparison {
  Comparison A;
  Comparison B;
};
ABComparison AB_integrals(double alpha, double theta, double t, double upper = 0.5,
                          const quad::QuadSpec& spec = {});

// I(alpha; x, y) = int_x^y e^{-u} u^alpha du with the lemma's two-sided
// bounds, M = c/2, N = 2c.
struct GammaBounds {
  EvalResult oracle;
  double lower = 0.0;
  double upper = 0.0;
  int case_index = 0;  // 1..4
};
GammaBounds inc_gamma(double alpha, double x, double y, const quad::QuadSpec& spec = {});

double lambert_w(double z);
// z on [0, e], ln z above.
double lambert_comparator(double z);
// Range of W(z) / comparator over the given points.
std::pair<double, double> lambert_band(const std::vector<double>& z);

// Zero brackets for h(theta) = theta^a ln theta.
//   case 1 (M < 1/2):       h = -M on (0, e^{-1/a})
//   case 2 (M > 2, c > 0):  h = cM on theta > 1
struct RootBrackets {
  int case_index = 0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double root = 0.0;  // NaN when h never reaches the level on the branch
  bool root_exists = false;
  bool contains_root() const;
};
RootBrackets h_root_brackets(double a, double M, double c = 1.0);

// Both inequalities bounding x^eps - 1 for x > 1.
bool power_log_bounds(double eps, double x);

// The band suites on the fixed grids used by the tests and the CLI.
std::vector<BandReport> appendix_bands();

}  // namespace hsstokes::estimates

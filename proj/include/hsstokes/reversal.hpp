// Sign structure of one velocity component along the normal direction:
// sign-change intervals, zeros, the beta curves near t = 1 and the
// separation / reversal point classifiers.
//
// A sample is signed only when |w| > margin * error_estimate. Otherwise the
// quadrature is tightened and the sample re-evaluated; a sample that stays
// inside its own error bar is never given a sign. Tolerances are relative to
// the integral of |integrand|, which stays finite at a zero of w.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsstokes/boundary.hpp"
#include "hsstokes/quadrature.hpp"

namespace hsstokes::reversal {

// w(x', x_n, t) at a fixed tangential position.
using FieldProbe = std::function<EvalResult(double xn, double t, const quad::QuadSpec& spec)>;

FieldProbe velocity_probe(int component, std::vector<double> x_prime, const BoundaryProfile& profile);

class IndeterminateRegion : public std::runtime_error {
 public:
  IndeterminateRegion(const std::string& what, double xn, double t)
      : std::runtime_error(what), xn(xn), t(t) {}
  double xn, t;
};

class LostBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Inconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanOptions {
  quad::QuadSpec quad = default_quad();
  double margin = 10.0;
  int max_tightening = 3;
  double tighten_factor = 1e-2;
  int threads = 0;

  static quad::QuadSpec default_quad() {
    quad::QuadSpec q;
    q.abs_tol = 1e-300;
    q.rel_tol = 1e-7;
    q.rel_to = quad::RelativeTo::magnitude;
    return q;
  }
};

struct SignedSample {
  double xn = 0.0;
  double value = 0.0;
  double error = 0.0;
  int sign = 0;  // -1, +1, or 0 for an exact zero
};

enum class IntervalKind { minus_plus, plus_minus };

struct SignInterval {
  IntervalKind kind = IntervalKind::minus_plus;
  double y1 = 0.0;  // last sample of the first sign
  double y2 = 0.0;  // first sample of the second sign
  double lo = 0.0;  // extent of the two runs around the change
  double hi = 0.0;
};

struct ScanResult {
  std::vector<SignedSample> samples;
  std::vector<SignInterval> intervals;
  // Signs of the runs from the wall upwards, e.g. {-1, +1}.
  std::vector<int> pattern() const;
};

// Throws IndeterminateRegion when a sample cannot be signed.
SignedSample signed_sample(const FieldProbe& f, double xn, double t, const ScanOptions& opt);

// grid: strictly increasing, at least 16 points.
ScanResult sign_scan(const FieldProbe& f, double t, const std::vector<double>& grid, const ScanOptions& opt);

// Sign intervals of an already signed sequence.
std::vector<SignInterval> intervals_of(const std::vector<SignedSample>& s);

struct ZeroRecord {
  int component = 0;
  std::vector<double> x_prime;
  double t = 0.0;
  double x_n_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double residual = 0.0;
  double error = 0.0;
};

// Bisection at the geometric midpoint until hi - lo < rel_width * x, followed
// by a few secant steps to bring |w| under margin * error where possible.
ZeroRecord locate_zero(const FieldProbe& f, double t, double lo, double hi, const ScanOptions& opt,
                       double rel_width = 1e-3);

struct BetaPoint {
  double t = 0.0;
  std::optional<double> beta1, beta2;  // empty when no minus_plus interval was found
};

// Endpoints of the wall-adjacent minus_plus interval at each t, refined by
// locate_zero when refine is set.
std::vector<BetaPoint> beta_curves(const FieldProbe& f, const std::vector<double>& t_grid,
                                   const std::vector<double>& xn_grid, const ScanOptions& opt, bool refine = true);

struct SeparationWindows {
  std::vector<double> t_before;  // t < 1
  std::vector<double> t_after;   // t > 1, the beta curve grid
  std::vector<double> xn_grid;
  double delta = 0.0;            // upper end of condition (iii), defaults to the grid end
};

struct SeparationVerdict {
  bool holds = false;
  bool positive_before = false;   // (i)
  bool alpha_nonincreasing = false;
  bool reversed_after = false;    // (ii) and (iii)
  bool beta_monotone = false;
  bool limit_check = false;       // (iv): beta2 at the smallest t-1 below 1/4 of its value at the largest
  double beta2_ratio = 0.0;
  std::vector<std::pair<double, double>> alpha_samples;
  std::vector<BetaPoint> beta_samples;
};

SeparationVerdict classify_separation(const FieldProbe& f, const SeparationWindows& w, const ScanOptions& opt);

struct ReversalVerdict {
  bool is_reversal = false;
  // (t, lower neighbour, zero, upper neighbour) for each t in the window.
  struct Row {
    double t, f, h, g;
  };
  std::vector<Row> rows;
};

// Follows the zero z through the t window: at each t re-locates the zero
// within (x_n*/spread, x_n* spread) and checks opposite signs at the
// neighbours f(t) < h(t) < g(t).
ReversalVerdict classify_reversal(const FieldProbe& f, const ZeroRecord& z, const std::vector<double>& t_window,
                                  const ScanOptions& opt, double spread = 2.0);

}  // namespace hsstokes::reversal

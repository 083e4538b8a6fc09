// Region sets for the zero asymptotics, the predicted zero magnitude in each
// region, and log-log exponent fits of measured zeros.
//
// The region inequalities are stated up to constants. Here every suppressed
// constant is 1, so membership is reproducible; the free exponents of the
// t < 1 tangential sets are fixed at theta0 = 1, theta1 = a/2.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hsstokes::scaling {

enum class Family { A, B, C, D };
char family_letter(Family f);

struct RegionLabel {
  Family family = Family::A;
  int index = 1;
  std::map<std::string, double> constants_used;
  std::string name() const;  // e.g. "A1"
};

struct RegionParams {
  double a = 0.0;
  double x_prime_norm = 0.0;
  double t = 0.0;
  int n = 2;
  double mass = 0.0;  // int_0^{1/2} phi, needed by the D sets
};

inline constexpr double kTheta0 = 1.0;
inline double theta1(double a) { return 0.5 * a; }
// Width of the band standing in for a two-sided "~ alpha" condition.
inline constexpr double kPointBand = 2.718281828459045;

// All labels whose defining inequalities hold. A and B need t > 1, C and D
// need t < 1.
std::vector<RegionLabel> region_classify(const RegionParams& p);

// Auxiliary functions exactly as printed; 0 where every indicator is off.
double f_a(double a, double t);
double f_ia(int i, double a, double t);
double sigma(double a, double t);
double mu(double a, double t, double mass);
double g_ia(int i, double a, double t, double mass);

class NoBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// tangential: a tangential component near the wall; normal: w_n near the
// wall; normal_far: the w_n zero at the scale |x'| (a > 0, t > 1).
enum class ZeroKind { tangential, normal, normal_far };

// Magnitude of the zero up to constants. For t >= 9/8 (tangential) and
// t > 9/8 (normal) the formula does not depend on the region and region may be
// empty. Throws NoBranch when no printed case applies or the formula is not a
// positive finite number.
double predicted_zero(const RegionParams& p, ZeroKind kind, const std::optional<RegionLabel>& region);

class InsufficientSpan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sweep { t_minus_1, x_prime_norm };

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> range;
};

// OLS of ln x* against ln s over at least 6 samples spanning min_decades.
// When correction is set, x* correction(s) is fitted instead; this removes a
// known logarithmic factor before the fit.
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& samples, Sweep sweep,
                        const std::function<double(double)>& correction = {}, double min_decades = 3.0);

}  // namespace hsstokes::scaling

// Fixed verification workloads shared by the command-line tool and the
// acceptance tests. Each returns plain records; serialization is left to the
// caller. Random points come from a seeded 64-bit Mersenne twister mapped to
// [0, 1) by hand, so they are the same with every standard library.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hsstokes/estimates.hpp"
#include "hsstokes/quadrature.hpp"
#include "hsstokes/reversal.hpp"
#include "hsstokes/scaling.hpp"

namespace hsstokes::suites {

struct Verification {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> notes;

  void metric(const std::string& k, double v) { metrics.emplace_back(k, v); }
  void note(const std::string& k, const std::string& v) { notes.emplace_back(k, v); }
};

class PointSource {
 public:
  explicit PointSource(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> logspace(double lo, double hi, int count);

Verification from_band(const estimates::BandReport& b);

// Sum of L_ii against d_n Gamma / 2, L_ij = L_ji on tangential pairs,
// L_in = L_ni + B_in, and L~ from the identity against its half-ball
// principal value. Relative errors against limit.
std::vector<Verification> identity_suite(int n, int points, std::uint64_t seed, int threads, double limit = 1e-6);

// Theta-form velocity against the physical-space oracle, n = 2, a = -1/2.
// Passes when every difference is within 3 x the combined error estimate.
Verification assembly_check(int component, int points, std::uint64_t seed, int threads);

// |div w| against the Frobenius norm of grad w by central differences, n = 2.
Verification divergence_check(int points, std::uint64_t seed, int threads, double limit = 1e-2);

// Reversal counts: a = -1/2, n = 2, |x'| = 12, t = 1.05, window [1.02, 1.10].
Verification reversal_counts(int threads);

// Separation pipeline at the given a (n = 2, |x'| = 20). expect_holds selects
// whether the verdict should hold (a = -3/4) or fail its limit check.
Verification separation(double a, bool expect_holds, int threads);

// Sign structure before t = 1 (t = 0.95).
Verification pre_critical(int threads);

// Tangential zeros at a = -3/4 against t - 1 and against |x'|.
std::vector<Verification> exponent_fits(int threads);

// Wall-adjacent zero of a tangential component, or nullopt when the scan
// shows no minus_plus change at the wall.
std::optional<reversal::ZeroRecord> wall_zero(const reversal::FieldProbe& f, double t,
                                              const std::vector<double>& grid, const reversal::ScanOptions& opt);

}  // namespace hsstokes::suites

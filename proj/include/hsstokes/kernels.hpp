// Heat and Newtonian kernels in R^n, n = 2 or 3, and the one-dimensional
// Gaussian pieces the half-space formulas are built from.
//
//   Gamma(x, t) = (4 pi t)^(-n/2) exp(-|x|^2 / 4t)  for t > 0, 0 otherwise
//   N(x)        = ln|x| / (2 pi)                     for n = 2
//               = -|x|^(2-n) / (n (n-2) omega_n)     for n >= 3
//
// omega_n is the volume of the unit ball. Points are passed as spans whose
// length is the dimension.
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace hsstokes {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A point (x', x_n) of the closed half space, n = 2 or 3.
struct SpacePoint {
  int dim = 2;
  std::array<double, 2> xp{};
  double xn = 0.0;

  static SpacePoint make(std::span<const double> tangential, double normal) {
    if (tangential.size() < 1 || tangential.size() > 2)
      throw DomainError("SpacePoint supports n = 2 or 3");
    if (!(normal >= 0.0)) throw DomainError("SpacePoint needs x_n >= 0");
    SpacePoint p;
    p.dim = static_cast<int>(tangential.size()) + 1;
    for (std::size_t k = 0; k < tangential.size(); ++k) p.xp[k] = tangential[k];
    p.xn = normal;
    return p;
  }
  static SpacePoint planar(double x1, double normal) {
    const double t[1] = {x1};
    return make(t, normal);
  }
  static SpacePoint spatial(double x1, double x2, double normal) {
    const double t[2] = {x1, x2};
    return make(t, normal);
  }
  std::span<const double> tangential() const { return {xp.data(), static_cast<std::size_t>(dim - 1)}; }
  double tangential_norm() const { return std::hypot(xp[0], dim == 3 ? xp[1] : 0.0); }
  double norm() const { return std::hypot(tangential_norm(), xn); }
  // Coordinates as one n-vector; pass full().data() with dim for kernel calls.
  std::array<double, 3> full() const {
    std::array<double, 3> f{};
    for (int k = 0; k < dim - 1; ++k) f[k] = xp[k];
    f[dim - 1] = xn;
    return f;
  }
  std::span<const double> as_span(std::array<double, 3>& storage) const {
    storage = full();
    return {storage.data(), static_cast<std::size_t>(dim)};
  }
};

namespace kernels {

inline constexpr int kMaxDim = 3;
using Vec = std::array<double, kMaxDim>;
using Mat = std::array<Vec, kMaxDim>;
using Tensor3 = std::array<Mat, kMaxDim>;

double unit_ball_volume(int n);

double heat_kernel(std::span<const double> x, double t);
double heat_kernel_dn(std::span<const double> x, double t);
// Gamma' on R^(n-1), the tangential factor of Gamma.
double heat_kernel_prime(std::span<const double> xp, double t);

// Gamma_1 and its derivatives in y, all for t > 0.
inline double gauss1(double y, double t) {
  return std::exp(-y * y / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}
inline double gauss1_d1(double y, double t) { return -y / (2.0 * t) * gauss1(y, t); }
inline double gauss1_d2(double y, double t) {
  return (y * y / (4.0 * t * t) - 1.0 / (2.0 * t)) * gauss1(y, t);
}
inline double gauss1_d3(double y, double t) {
  return (3.0 * y / (4.0 * t * t) - y * y * y / (8.0 * t * t * t)) * gauss1(y, t);
}

// Gamma_1(x_n, t) with the t <= 0 convention of Gamma.
double heat_kernel_1d(double y, double t);

double newton_kernel(std::span<const double> x);
Vec newton_grad(std::span<const double> x);
Mat newton_hess(std::span<const double> x);
Tensor3 newton_third(std::span<const double> x);

}  // namespace kernels
}  // namespace hsstokes

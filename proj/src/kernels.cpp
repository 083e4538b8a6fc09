#include "hsstokes/kernels.hpp"

#include <string>

namespace hsstokes::kernels {
namespace {

void check_dim(std::span<const double> x) {
  if (x.size() < 1 || x.size() > static_cast<std::size_t>(kMaxDim))
    throw DomainError("kernel dimension must be between 1 and 3");
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void require_positive_time(double t) {
  if (!(t > 0.0)) throw DomainError("derivative kernels need t > 0, got " + std::to_string(t));
}

void require_nonzero(double r2) {
  if (!(r2 > 0.0)) throw DomainError("Newtonian kernel is singular at the origin");
}

// n * omega_n, the area of the unit sphere: the constant in grad N = x / (n omega_n |x|^n).
double sphere_area(int n) { return n * unit_ball_volume(n); }

}  // namespace

double unit_ball_volume(int n) {
  static const std::array<double, 4> table = {1.0, 2.0, M_PI, 4.0 * M_PI / 3.0};
  if (n >= 0 && n <= 3) return table[n];
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double heat_kernel(std::span<const double> x, double t) {
  check_dim(x);
  if (t <= 0.0) return 0.0;
  const double n = static_cast<double>(x.size());
  return std::pow(4.0 * M_PI * t, -0.5 * n) * std::exp(-norm2(x) / (4.0 * t));
}

double heat_kernel_dn(std::span<const double> x, double t) {
  check_dim(x);
  require_positive_time(t);
  return -x.back() / (2.0 * t) * heat_kernel(x, t);
}

double heat_kernel_prime(std::span<const double> xp, double t) {
  if (xp.empty()) return t > 0.0 ? 1.0 : 0.0;
  return heat_kernel(xp, t);
}

double heat_kernel_1d(double y, double t) { return t > 0.0 ? gauss1(y, t) : 0.0; }

double newton_kernel(std::span<const double> x) {
  check_dim(x);
  const double r2 = norm2(x);
  require_nonzero(r2);
  const int n = static_cast<int>(x.size());
  if (n == 2) return std::log(r2) / (4.0 * M_PI);
  if (n == 1) return 0.5 * std::sqrt(r2);
  return -std::pow(r2, 0.5 * (2 - n)) / (n * (n - 2) * unit_ball_volume(n));
}

Vec newton_grad(std::span<const double> x) {
  check_dim(x);
  const double r2 = norm2(x);
  require_nonzero(r2);
  const int n = static_cast<int>(x.size());
  const double c = 1.0 / (sphere_area(n) * std::pow(r2, 0.5 * n));
  Vec g{};
  for (int i = 0; i < n; ++i) g[i] = c * x[i];
  return g;
}

// d_i d_j N = (delta_ij |x|^2 - n x_i x_j) / (n omega_n |x|^(n+2))
Mat newton_hess(std::span<const double> x) {
  check_dim(x);
  const double r2 = norm2(x);
  require_nonzero(r2);
  const int n = static_cast<int>(x.size());
  const double c = 1.0 / (sphere_area(n) * std::pow(r2, 0.5 * n + 1.0));
  Mat h{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i][j] = c * ((i == j ? r2 : 0.0) - n * x[i] * x[j]);
  return h;
}

// d_i d_j d_k N = [-n (delta_ij x_k + delta_ik x_j + delta_jk x_i) |x|^2
//                  + n (n+2) x_i x_j x_k] / (n omega_n |x|^(n+4))
Tensor3 newton_third(std::span<const double> x) {
  check_dim(x);
  const double r2 = norm2(x);
  require_nonzero(r2);
  const int n = static_cast<int>(x.size());
  const double c = 1.0 / (sphere_area(n) * std::pow(r2, 0.5 * n + 2.0));
  Tensor3 d{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lin = 0.0;
        if (i == j) lin += x[k];
        if (i == k) lin += x[j];
        if (j == k) lin += x[i];
        d[i][j][k] = c * (-n * lin * r2 + n * (n + 2.0) * x[i] * x[j] * x[k]);
      }
  return d;
}

}  // namespace hsstokes::kernels

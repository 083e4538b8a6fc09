// Heat-time representation of the slab integrals behind L_ij.
//
// The Newtonian gradient is a superposition of heat kernels,
//
//   d_i N(w) = int_0^inf (w_i / 2 sigma) Gamma(w, sigma) d sigma,
//
// so every slab convolution of d^2 Gamma against d_i N splits into a
// tangential heat kernel at time t + sigma (closed form) times a
// one-dimensional normal integral over 0 < u < x_n of two Gaussians. The
// normal integrals are truncated Gaussian moments:
//
//   q10 = int_0^xn  G1'(xn - u, t)                G1(u, s) du
//   q20 = int_0^xn  G1''(xn - u, t)               G1(u, s) du
//   q11 = int_0^xn  G1'(xn - u, t)  (u / 2s)      G1(u, s) du
//   q21 = int_0^xn  G1''(xn - u, t) (u / 2s)      G1(u, s) du
//
// with G1 the one-dimensional heat kernel and s = sigma.
#pragma once

#include <array>
#include <span>
#include <vector>

namespace hsstokes::heat_time {

struct NormalFactors {
  double q10 = 0.0;
  double q20 = 0.0;
  double q11 = 0.0;
  double q21 = 0.0;
};

NormalFactors normal_factors(double xn, double t, double sigma);

// Derivatives of the (n-1)-dimensional heat kernel at (x', theta):
// value, gradient and Hessian (only the first m = n-1 slots are used).
struct TangentialJet {
  double g = 0.0;
  std::array<double, 2> d1{};
  std::array<std::array<double, 2>, 2> d2{};
};

TangentialJet tangential_jet(std::span<const double> xp, double theta);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

}  // namespace hsstokes::heat_time

// Velocity of the half-space Stokes flow driven by the normal influx
// g = psi(y') phi(s) e_n, assembled from its kernel pieces
//
//   w^L_ij = 4 int int L_ij(x - y', t - s) psi phi        (same for L~ -> w^(L)_ij)
//   w^B_i  = 4 int int B_in(x - y', t - s) psi phi
//   w^N_i  = 2 phi(t) int d_i N(x - y') psi dy'
//   w^G    = -2 int int d_n Gamma(x - y', t - s) psi phi
//
//   w_i = w^(L)_in + w^B_i + w^N_i                        (i < n)
//   w_n = -sum_{i<n} w^(L)_ii + w^N_n + (n-1)/n w^G
//
// The L and B pieces are computed in the heat-time form: with
// tau = t - s and theta = tau + sigma the double time integral becomes
//
//   int dtheta Psi_alpha(x', theta) int dtau phi(t - tau) q(x_n; tau, theta - tau),
//
// where Psi_alpha = psi * d^alpha Gamma'(., theta) is evaluated once per
// theta node. Each sample therefore costs a two-level quadrature.
#pragma once

#include <map>
#include <string>

#include "hsstokes/boundary.hpp"
#include "hsstokes/kernels.hpp"
#include "hsstokes/quadrature.hpp"

namespace hsstokes::velocity {

enum class Piece { L, Ltilde, B, N, G };

struct VelocityQuery {
  int component = 1;  // 1..n
  SpacePoint x;
  double t = 1.0;
  BoundaryProfile profile{2, -0.5};
  quad::QuadSpec quad;
};

struct VelocitySample {
  double value = 0.0;
  double error_estimate = 0.0;
  std::map<std::string, EvalResult> parts;
};

// One piece. j is ignored for B, N and G; i is ignored for G.
EvalResult w_part(Piece piece, int i, int j, const VelocityQuery& q);

VelocitySample w_tangential(int i, const VelocityQuery& q);
VelocitySample w_normal(const VelocityQuery& q);
// Dispatches on q.component.
VelocitySample w_component(const VelocityQuery& q);

// -sum_{i<n} w^L_ii + w^N_n, which is what the kernel identity gives for w_n
// without the L~ rearrangement.
VelocitySample w_normal_untilded(const VelocityQuery& q);
// The same sum with an additional + w^G, kept to document that this form is
// not equal to w_n (it exceeds it by exactly w^G).
VelocitySample w_normal_untilded_with_wg(const VelocityQuery& q);

// Independent route: sum_j int int K_ij g_j with L_ij from physical-space
// quadrature of its defining slab integral. n = 2 only; slow.
VelocitySample w_direct_oracle(int i, const VelocityQuery& q);

}  // namespace hsstokes::velocity

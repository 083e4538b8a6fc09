// Regular part of the half-space Poisson kernel.
//
//   L_ij(x, t) = d_{x_j} int_{0 < w_n < x_n} d_n Gamma(x - w, t) d_i N(w) dw
//   B_in(x, t) = p.v. int_{R^(n-1)} d_n Gamma(x - z', t) d_i N(z', 0) dz'
//   K_ij       = -2 delta_ij d_n Gamma + 4 L_ij   (+ the instantaneous term)
//
// and the half-ball principal value L~_ij, related to L_ij by
//
//   L_ij = L~_ij + delta_ij / (2n) d_n Gamma + [i < n, j = n] B_in.
//
// Indices are 1-based throughout: i, j in 1..n, with n the normal direction.
//
// The production path (L_ij, B_in_heat_time) writes d_i N as a heat-time
// superposition, which collapses the slab integral to one integral over the
// auxiliary time sigma with closed-form integrands (see heat_time.hpp). The
// physical-space routines are independent oracles used by the tests.
#pragma once

#include "hsstokes/kernels.hpp"
#include "hsstokes/quadrature.hpp"

namespace hsstokes::green {

struct TensorQuery {
  int i = 1;
  int j = 1;
  SpacePoint x;
  double t = 1.0;
};

EvalResult L_ij(const TensorQuery& q, const quad::QuadSpec& spec = {});

// The slab integral before the x_j derivative, d/dx_j of which is L_ij.
EvalResult slab_potential(int i, const SpacePoint& x, double t, const quad::QuadSpec& spec = {});

// L_ij by iterated quadrature in physical space, n = 2 only.
EvalResult L_ij_physical(const TensorQuery& q, const quad::QuadSpec& spec = {});

// Principal value about z' = 0 by antisymmetrization, i < n.
EvalResult B_in(int i, const SpacePoint& x, double t, const quad::QuadSpec& spec = {});

// Same quantity through the heat-time representation of d_i N(z', 0).
EvalResult B_in_heat_time(int i, const SpacePoint& x, double t, const quad::QuadSpec& spec = {});

// L~_ij from the identity above.
EvalResult L_tilde_ij(const TensorQuery& q, const quad::QuadSpec& spec = {});

// L~_ij straight from its definition with the half ball of radius eps
// removed; eps = 0 gives the limit (the removable part is subtracted
// analytically inside a fixed half ball).
EvalResult L_tilde_ball(const TensorQuery& q, double eps, const quad::QuadSpec& spec = {});

EvalResult K_ij_regular(const TensorQuery& q, const quad::QuadSpec& spec = {});

}  // namespace hsstokes::green

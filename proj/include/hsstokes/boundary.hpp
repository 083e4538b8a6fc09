// Boundary influx g = psi(y') phi(s) e_n.
//
//   psi(y') = Z exp(-1 / (1 - |2y'|^2))  on |y'| < 1/2, normalized to unit mass
//   phi(s)  = ramp(s) (1 - s)^a          on s < 1, zero from s = 1 on
//
// ramp is a C-infinity step from 0 at ramp_lo to 1 at ramp_hi, so phi is
// exactly (1 - s)^a on [ramp_hi, 1).
#pragma once

#include <array>
#include <span>

namespace hsstokes {

class BoundaryProfile {
 public:
  // n is the space dimension (psi lives on R^(n-1)); a must lie in (-1, 1].
  // Larger a is accepted but flagged through untested().
  BoundaryProfile(int n, double a, double amplitude = 1.0);

  int dim() const { return n_; }
  double a() const { return a_; }
  double amplitude() const { return amplitude_; }
  double ramp_lo() const { return 0.25; }
  double ramp_hi() const { return 0.5; }
  bool untested() const { return a_ > 1.0; }

  double psi(std::span<const double> yp) const;
  // psi as a function of |y'|.
  double psi_radial(double r) const;
  // psi_radial and its first two derivatives in r.
  std::array<double, 3> psi_radial_jet(double r) const;
  double phi(double s) const;
  // phi(1 - d) evaluated from the distance d to the final time, so the factor
  // d^a keeps full relative precision for tiny d.
  double phi_from_end(double d) const;
  double ramp(double s) const;
  // M = integral of phi over (0, 1/2).
  double mass() const { return mass_; }

 private:
  int n_;
  double a_;
  double amplitude_;
  double psi_scale_ = 1.0;
  double mass_ = 0.0;
};

}  // namespace hsstokes

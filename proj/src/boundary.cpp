#include "hsstokes/boundary.hpp"

#include <cmath>
#include <string>

#include "hsstokes/kernels.hpp"
#include "hsstokes/quadrature.hpp"

namespace hsstokes {
namespace {

double bump(double r) {
  const double q = 1.0 - 4.0 * r * r;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

quad::QuadSpec setup_spec() {
  quad::QuadSpec s;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-13;
  return s;
}

}  // namespace

BoundaryProfile::BoundaryProfile(int n, double a, double amplitude)
    : n_(n), a_(a), amplitude_(amplitude) {
  if (n < 2 || n > 3) throw DomainError("boundary profile supports n = 2 or 3");
  if (!(a > -1.0)) throw DomainError("phi needs a > -1 to be integrable, got " + std::to_string(a));

  const auto spec = setup_spec();
  // Mass of the unnormalized bump over the (n-1)-ball of radius 1/2.
  double raw;
  if (n == 2) {
    raw = 2.0 * quad::integrate_1d(bump, 0.0, 0.5, spec).value;
  } else {
    raw = 2.0 * M_PI * quad::integrate_1d([](double r) { return r * bump(r); }, 0.0, 0.5, spec).value;
  }
  psi_scale_ = amplitude_ / raw;

  mass_ = quad::integrate_1d([this](double s) { return phi(s); }, ramp_lo(), ramp_hi(), spec).value;
}

double BoundaryProfile::psi_radial(double r) const { return psi_scale_ * bump(r); }

std::array<double, 3> BoundaryProfile::psi_radial_jet(double r) const {
  const double u = 1.0 - 4.0 * r * r;
  if (!(u > 0.0)) return {0.0, 0.0, 0.0};
  // f = e^{-1/u}, f' = -8 r f / u^2
  const double f = psi_scale_ * std::exp(-1.0 / u);
  const double u2 = u * u;
  const double f1 = -8.0 * r * f / u2;
  const double f2 = -8.0 * (f / u2 + r * f1 / u2 + 16.0 * r * r * f / (u2 * u));
  return {f, f1, f2};
}

double BoundaryProfile::psi(std::span<const double> yp) const {
  double r2 = 0.0;
  for (double v : yp) r2 += v * v;
  return psi_radial(std::sqrt(r2));
}

double BoundaryProfile::ramp(double s) const {
  const double u = (s - ramp_lo()) / (ramp_hi() - ramp_lo());
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  // e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)}) without under- or overflow.
  const double e = 1.0 / u - 1.0 / (1.0 - u);
  if (e > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(e));
}

double BoundaryProfile::phi(double s) const {
  if (s >= 1.0) return 0.0;
  return phi_from_end(1.0 - s);
}

double BoundaryProfile::phi_from_end(double d) const {
  if (d <= 0.0) return 0.0;
  const double r = ramp(1.0 - d);
  if (r == 0.0) return 0.0;
  return r * std::pow(d, a_);
}

}  // namespace hsstokes

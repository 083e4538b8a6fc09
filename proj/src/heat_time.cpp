#include "hsstokes/heat_time.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "hsstokes/kernels.hpp"

namespace hsstokes::heat_time {
namespace {

using kernels::gauss1;
using kernels::gauss1_d1;
using kernels::gauss1_d2;

// Short normal ranges (xn below two widths of the combined Gaussian) lose
// digits in the moment recursion; a fixed Gauss rule is exact there to
// rounding because both factors are smooth on the scale of the interval.
NormalFactors by_gauss_rule(double xn, double t, double s) {
  static const GaussRule& r = gauss_legendre(20);
  NormalFactors f;
  const double h = 0.5 * xn;
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    const double u = h * (1.0 + r.x[k]);
    const double w = h * r.w[k];
    const double gu = gauss1(u, s);
    const double lift = u / (2.0 * s) * gu;
    const double d1 = gauss1_d1(xn - u, t);
    const double d2 = gauss1_d2(xn - u, t);
    f.q10 += w * d1 * gu;
    f.q20 += w * d2 * gu;
    f.q11 += w * d1 * lift;
    f.q21 += w * d2 * lift;
  }
  return f;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

NormalFactors normal_factors(double xn, double t, double s) {
  if (!(xn > 0.0)) return {};
  const double theta = t + s;
  const double rho = t * s / theta;
  if (xn <= 2.0 * std::sqrt(rho)) return by_gauss_rule(xn, t, s);

  // Complete the square: G1(xn - u, t) G1(u, s) = G1(xn, t + s) G1(u - mu, rho).
  const double mu = xn * s / theta;
  const double nu = xn * t / theta;
  const double root = 2.0 * std::sqrt(rho);
  const double gmu = gauss1(mu, rho);
  const double gnu = gauss1(nu, rho);
  // Moments of G1(., rho) over [-mu, nu].
  const double m0 = 0.5 * (std::erf(nu / root) + std::erf(mu / root));
  const double m1 = 2.0 * rho * (gmu - gnu);
  const double m2 = 2.0 * rho * m0 + 2.0 * rho * (-mu * gmu - nu * gnu);
  const double m3 = 4.0 * rho * m1 + 2.0 * rho * (mu * mu * gmu - nu * nu * gnu);

  const double G = gauss1(xn, theta);
  // Polynomial weights in v = u - mu: xn - u = nu - v, u = mu + v.
  NormalFactors f;
  f.q10 = -G / (2.0 * t) * (nu * m0 - m1);
  const double sq = nu * nu * m0 - 2.0 * nu * m1 + m2;  // int (nu - v)^2
  f.q20 = G * (sq / (4.0 * t * t) - m0 / (2.0 * t));
  const double lin = nu * mu * m0 + (nu - mu) * m1 - m2;  // int (nu - v)(mu + v)
  f.q11 = -G / (4.0 * t * s) * lin;
  const double cub = nu * nu * mu * m0 + (nu * nu - 2.0 * nu * mu) * m1 + (mu - 2.0 * nu) * m2 + m3;
  f.q21 = G / (2.0 * s) * (cub / (4.0 * t * t) - (mu * m0 + m1) / (2.0 * t));
  return f;
}

TangentialJet tangential_jet(std::span<const double> xp, double theta) {
  TangentialJet j;
  const int m = static_cast<int>(xp.size());
  double g = 1.0;
  for (int k = 0; k < m; ++k) g *= gauss1(xp[k], theta);
  j.g = g;
  for (int a = 0; a < m; ++a) {
    j.d1[a] = -xp[a] / (2.0 * theta) * g;
    for (int b = 0; b < m; ++b)
      j.d2[a][b] = (xp[a] * xp[b] / (4.0 * theta * theta) - (a == b ? 1.0 / (2.0 * theta) : 0.0)) * g;
  }
  return j;
}

}  // namespace hsstokes::heat_time

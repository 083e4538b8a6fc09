#include "hsstokes/green.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hsstokes/heat_time.hpp"

namespace hsstokes::green {
namespace {

using heat_time::normal_factors;
using heat_time::tangential_jet;
using kernels::gauss1;
using kernels::gauss1_d1;
using kernels::gauss1_d2;

// Gaussian factors below exp(-39) ~ 1e-17 are dropped: windows are
// kGaussReach * sqrt(t) wide.
constexpr double kGaussReach = 12.5;

void check_query(const TensorQuery& q) {
  const int n = q.x.dim;
  if (q.i < 1 || q.i > n || q.j < 1 || q.j > n)
    throw DomainError("tensor indices must lie in 1..n");
  if (!(q.t > 0.0)) throw DomainError("tensor evaluation needs t > 0");
  if (!(q.x.xn >= 0.0)) throw DomainError("tensor evaluation needs x_n >= 0");
}

// Integral over sigma in (0, inf) of f, truncated to [d_lo, d_hi] with the
// two tails estimated from the end values. Near sigma = 0 the integrands are
// at worst sigma^(-1/2), near infinity at worst sigma^(-2).
template <class F>
EvalResult sigma_integral(F&& f, double d_lo, double d_hi, const quad::QuadSpec& spec) {
  EvalResult r = quad::integrate_log_offset(f, d_lo, d_hi, spec);
  r.error_estimate += 2.0 * std::abs(f(d_lo)) * d_lo + std::abs(f(d_hi)) * d_hi;
  return r;
}

std::pair<double, double> sigma_range(const SpacePoint& x, double t) {
  const double r2 = x.tangential_norm() * x.tangential_norm() + x.xn * x.xn;
  const double lo = 1e-24 * std::min(t, std::max(x.xn * x.xn, 1e-300));
  const double hi = 1e13 * std::max({t, r2, 1.0});
  return {lo, hi};
}

double dn_heat(const SpacePoint& x, double t) {
  std::array<double, 3> s;
  return kernels::heat_kernel_dn(x.as_span(s), t);
}

}  // namespace

EvalResult L_ij(const TensorQuery& q, const quad::QuadSpec& spec) {
  check_query(q);
  const int n = q.x.dim;
  if (q.x.xn == 0.0) return {};
  const bool i_tan = q.i < n, j_tan = q.j < n;
  const int a = q.i - 1, b = q.j - 1;
  const auto xp = q.x.tangential();
  const double xn = q.x.xn, t = q.t;
  auto f = [&](double s) {
    const auto nf = normal_factors(xn, t, s);
    const auto jet = tangential_jet(xp, t + s);
    if (i_tan && j_tan) return -jet.d2[a][b] * nf.q10;
    if (i_tan) return -jet.d1[a] * nf.q20;
    if (j_tan) return jet.d1[b] * nf.q11;
    return jet.g * nf.q21;
  };
  const auto [lo, hi] = sigma_range(q.x, t);
  return sigma_integral(f, lo, hi, spec);
}

EvalResult slab_potential(int i, const SpacePoint& x, double t, const quad::QuadSpec& spec) {
  check_query({i, 1, x, t});
  const int n = x.dim;
  if (x.xn == 0.0) return {};
  const auto xp = x.tangential();
  auto f = [&](double s) {
    const auto nf = normal_factors(x.xn, t, s);
    const auto jet = tangential_jet(xp, t + s);
    return i < n ? -jet.d1[i - 1] * nf.q10 : jet.g * nf.q11;
  };
  const auto [lo, hi] = sigma_range(x, t);
  return sigma_integral(f, lo, hi, spec);
}

EvalResult L_ij_physical(const TensorQuery& q, const quad::QuadSpec& spec) {
  check_query(q);
  if (q.x.dim != 2) throw DomainError("physical-space L_ij is implemented for n = 2");
  if (q.x.xn == 0.0) return {};
  const double x1 = q.x.xp[0], xn = q.x.xn, t = q.t;
  const double W = kGaussReach * std::sqrt(t);
  const double rt = std::sqrt(t);
  quad::QuadSpec inner = spec.lenient();
  inner.abs_tol = spec.abs_tol / (W + 1.0);

  // d_j d_n Gamma(x - w) d_i N(w) with w = (w1, wn), d_i N(w) = w_i / (2 pi |w|^2).
  auto row = [&](double wn) {
    const double yn = xn - wn;
    const double gn = q.j == 2 ? gauss1_d2(yn, t) : gauss1_d1(yn, t);
    auto g = [&](double w1) {
      const double y1 = x1 - w1;
      const double g1 = q.j == 1 ? gauss1_d1(y1, t) : gauss1(y1, t);
      const double r2 = w1 * w1 + wn * wn;
      const double dN = (q.i == 1 ? w1 : wn) / (2.0 * M_PI * r2);
      // d/dx1 of Gamma_1(x1 - w1) is Gamma_1'(y1); same for the normal factor.
      return g1 * gn * dN;
    };
    std::vector<double> pts{x1 - W, x1 + W};
    for (double p : {0.0, -wn, wn, -4.0 * wn, 4.0 * wn, x1, x1 - rt, x1 + rt, x1 - 4.0 * rt, x1 + 4.0 * rt})
      if (p > x1 - W && p < x1 + W) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return quad::integrate_1d(g, std::span<const double>(pts), inner);
  };
  std::vector<double> pts{std::max(0.0, xn - W), xn};
  for (double p : {xn - rt, xn - 4.0 * rt, 1e-3 * xn, 1e-1 * xn})
    if (p > pts.front() && p < xn) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  return quad::integrate_nested(row, std::span<const double>(pts), spec);
}

EvalResult B_in(int i, const SpacePoint& x, double t, const quad::QuadSpec& spec) {
  const int n = x.dim;
  if (i < 1 || i >= n) throw DomainError("B_in needs a tangential index i < n");
  if (!(t > 0.0)) throw DomainError("B_in needs t > 0");
  const int m = n - 1;
  const double r0 = x.tangential_norm();
  const double rt = std::sqrt(t);
  const double reach = kGaussReach * rt;
  const double cutoff = r0 + reach;
  const double area = n * kernels::unit_ball_volume(n);
  const auto xp = x.tangential();

  auto f = [&](std::span<const double> z) {
    double d2 = 0.0, r2 = 0.0;
    for (int k = 0; k < m; ++k) {
      d2 += (xp[k] - z[k]) * (xp[k] - z[k]);
      r2 += z[k] * z[k];
    }
    const double gauss = std::exp(-d2 / (4.0 * t)) / std::pow(4.0 * M_PI * t, 0.5 * m);
    return gauss * z[i - 1] / (area * std::pow(r2, 0.5 * n));
  };
  quad::PvHints hints;
  for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0})
    if (r0 + k * rt > 0.0) hints.radial_breaks.push_back(r0 + k * rt);
  if (m == 2 && r0 > 0.0) hints.angular_breaks.push_back(std::atan2(xp[1], xp[0]));
  const double mass_out = m == 1 ? std::erfc(reach / (2.0 * rt)) : std::exp(-reach * reach / (4.0 * t));
  hints.tail_bound = mass_out / (area * std::pow(cutoff, m));

  const double zero[2] = {0.0, 0.0};
  const double scale = gauss1_d1(x.xn, t);
  quad::QuadSpec s = spec;
  if (scale != 0.0) s.abs_tol = spec.abs_tol / std::abs(scale);
  EvalResult r = quad::integrate_pv_antisym(f, std::span<const double>(zero, m), cutoff, s, hints);
  r.value *= scale;
  r.error_estimate *= std::abs(scale);
  return r;
}

EvalResult B_in_heat_time(int i, const SpacePoint& x, double t, const quad::QuadSpec& spec) {
  const int n = x.dim;
  if (i < 1 || i >= n) throw DomainError("B_in needs a tangential index i < n");
  if (!(t > 0.0)) throw DomainError("B_in needs t > 0");
  const auto xp = x.tangential();
  const double scale = gauss1_d1(x.xn, t);
  auto f = [&](double s) { return -gauss1(0.0, s) * tangential_jet(xp, t + s).d1[i - 1]; };
  const auto [lo, hi] = sigma_range(x, t);
  quad::QuadSpec sp = spec;
  if (scale != 0.0) sp.abs_tol = spec.abs_tol / std::abs(scale);
  EvalResult r = sigma_integral(f, 1e-24 * t, hi, sp);
  (void)lo;
  r.value *= scale;
  r.error_estimate *= std::abs(scale);
  return r;
}

EvalResult L_tilde_ij(const TensorQuery& q, const quad::QuadSpec& spec) {
  check_query(q);
  const int n = q.x.dim;
  EvalResult r = L_ij(q, spec);
  if (q.i == q.j) r.value -= dn_heat(q.x, q.t) / (2.0 * n);
  if (q.i < n && q.j == n) {
    const EvalResult b = B_in(q.i, q.x, q.t, spec);
    r.value -= b.value;
    r.error_estimate += b.error_estimate;
  }
  return r;
}

namespace {

// d_i d_j N at z for 0-based indices.
double hess_entry(const double* z, int n, int a, int b) {
  const auto h = kernels::newton_hess(std::span<const double>(z, n));
  return h[a][b];
}

double dn_heat_at(const double* y, int n, double t) {
  return kernels::heat_kernel_dn(std::span<const double>(y, n), t);
}

// Removes the hole (-h, h) from [lo, hi] and adds breakpoints.
std::vector<std::vector<double>> pieces(double lo, double hi, double h, std::vector<double> marks) {
  std::vector<std::pair<double, double>> spans;
  if (h > 0.0) {
    if (lo < -h) spans.push_back({lo, std::min(hi, -h)});
    if (hi > h) spans.push_back({std::max(lo, h), hi});
  } else {
    spans.push_back({lo, hi});
  }
  std::vector<std::vector<double>> out;
  for (auto [a, b] : spans) {
    if (!(b > a)) continue;
    std::vector<double> p{a, b};
    for (double m : marks)
      if (m > a && m < b) p.push_back(m);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

EvalResult L_tilde_ball(const TensorQuery& q, double eps, const quad::QuadSpec& spec) {
  check_query(q);
  const int n = q.x.dim;
  if (!(q.x.xn > 0.0)) throw DomainError("half-ball evaluation needs x_n > 0");
  const double t = q.t, xn = q.x.xn;
  const int a = q.i - 1, b = q.j - 1;
  const double R = 0.5 * xn;
  if (eps < 0.0 || eps >= R) throw DomainError("eps must lie in [0, x_n / 2)");
  const auto X = q.x.full();
  const double base = dn_heat_at(X.data(), n, t);
  const double rt = std::sqrt(t);
  const double W = kGaussReach * rt;
  quad::QuadSpec inner = spec.lenient();
  inner.abs_tol = spec.abs_tol / (2.0 * W + 1.0);
  quad::QuadSpec innermost = inner;
  innermost.abs_tol = inner.abs_tol / (2.0 * W + 1.0);

  // Half ball eps < |z| < R, z_n > 0, with d_n Gamma(x) subtracted; the
  // subtracted constant integrates to zero over every half shell.
  auto ball_integrand = [&](const double* z) {
    double y[3];
    for (int k = 0; k < n; ++k) y[k] = X[k] - z[k];
    return (dn_heat_at(y, n, t) - base) * hess_entry(z, n, a, b);
  };
  EvalResult ball;
  if (n == 2) {
    auto shell = [&](double r) {
      auto g = [&](double ph) {
        const double z[2] = {r * std::cos(ph), r * std::sin(ph)};
        return r * ball_integrand(z);
      };
      return quad::integrate_1d(g, 0.0, M_PI, inner);
    };
    ball = quad::integrate_nested(shell, eps, R, spec);
  } else {
    auto shell = [&](double r) {
      auto polar = [&](double th) {
        auto g = [&](double ph) {
          const double st = std::sin(th);
          const double z[3] = {r * st * std::cos(ph), r * st * std::sin(ph), r * std::cos(th)};
          return r * r * st * ball_integrand(z);
        };
        const std::array<double, 5> ang{0.0, 0.5 * M_PI, M_PI, 1.5 * M_PI, 2.0 * M_PI};
        return quad::integrate_1d(g, std::span<const double>(ang), innermost);
      };
      return quad::integrate_nested(polar, 0.0, 0.5 * M_PI, inner);
    };
    ball = quad::integrate_nested(shell, eps, R, spec);
  }

  // Rest of the slab, |z| > R, iterated with z_n outermost.
  auto full_integrand = [&](const double* z) {
    double y[3];
    for (int k = 0; k < n; ++k) y[k] = X[k] - z[k];
    return dn_heat_at(y, n, t) * hess_entry(z, n, a, b);
  };
  auto hole = [&](double zn) { return zn < R ? std::sqrt(R * R - zn * zn) : 0.0; };
  auto marks_for = [&](double c, double h) {
    return std::vector<double>{0.0, c, c - rt, c + rt, c - 4.0 * rt, c + 4.0 * rt, -2.0 * h, 2.0 * h};
  };
  EvalResult rest;
  if (n == 2) {
    auto row = [&](double zn) {
      const double h = hole(zn);
      EvalResult acc;
      for (const auto& p : pieces(X[0] - W, X[0] + W, h, marks_for(X[0], std::max(h, zn)))) {
        auto g = [&](double z1) {
          const double z[2] = {z1, zn};
          return full_integrand(z);
        };
        const EvalResult e = quad::integrate_1d(g, std::span<const double>(p), inner);
        acc.value += e.value;
        acc.error_estimate += e.error_estimate;
      }
      return acc;
    };
    std::vector<double> zp{std::max(0.0, xn - W), xn};
    for (double m : {R, xn - rt, xn - 4.0 * rt, 0.1 * R})
      if (m > zp.front() && m < xn) zp.push_back(m);
    std::sort(zp.begin(), zp.end());
    rest = quad::integrate_nested(row, std::span<const double>(zp), spec);
  } else {
    auto slab = [&](double zn) {
      const double h = hole(zn);
      auto col = [&](double z1) {
        const double hz = std::abs(z1) < h ? std::sqrt(h * h - z1 * z1) : 0.0;
        EvalResult acc;
        for (const auto& p : pieces(X[1] - W, X[1] + W, hz, marks_for(X[1], std::max(hz, zn)))) {
          auto g = [&](double z2) {
            const double z[3] = {z1, z2, zn};
            return full_integrand(z);
          };
          const EvalResult e = quad::integrate_1d(g, std::span<const double>(p), innermost);
          acc.value += e.value;
          acc.error_estimate += e.error_estimate;
        }
        return acc;
      };
      std::vector<double> p1{X[0] - W, X[0] + W};
      for (double m : marks_for(X[0], std::max(h, zn))) p1.push_back(m);
      p1.push_back(-h);
      p1.push_back(h);
      std::sort(p1.begin(), p1.end());
      std::vector<double> p;
      for (double m : p1)
        if (m >= X[0] - W && m <= X[0] + W && (p.empty() || m > p.back())) p.push_back(m);
      return quad::integrate_nested(col, std::span<const double>(p), inner);
    };
    std::vector<double> zp{std::max(0.0, xn - W), xn};
    for (double m : {R, xn - rt, xn - 4.0 * rt, 0.1 * R})
      if (m > zp.front() && m < xn) zp.push_back(m);
    std::sort(zp.begin(), zp.end());
    rest = quad::integrate_nested(slab, std::span<const double>(zp), spec);
  }
  return {ball.value + rest.value, ball.error_estimate + rest.error_estimate,
          ball.subdivisions + rest.subdivisions};
}

EvalResult K_ij_regular(const TensorQuery& q, const quad::QuadSpec& spec) {
  check_query(q);
  EvalResult r = L_ij(q, spec);
  r.value *= 4.0;
  r.error_estimate *= 4.0;
  if (q.i == q.j) r.value -= 2.0 * dn_heat(q.x, q.t);
  return r;
}

}  // namespace hsstokes::green

#include "hsstokes/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hsstokes/green.hpp"
#include "hsstokes/heat_time.hpp"

namespace hsstokes::velocity {
namespace {

using heat_time::normal_factors;
using kernels::gauss1;
using kernels::gauss1_d1;

constexpr double kPsiRadius = 0.5;

// Slots of the tangential jet: value, gradient, Hessian (upper triangle).
constexpr int kSlots = 6;
constexpr int slot_d1(int a) { return 1 + a; }
constexpr int slot_d2(int a, int b) { return a == b ? (a == 0 ? 3 : 5) : 4; }

using Jet = std::array<double, kSlots>;

struct JetResult {
  Jet value{};
  Jet error{};
};

quad::QuadSpec inner_spec(const quad::QuadSpec& outer) {
  quad::QuadSpec s = outer.lenient();
  s.rel_tol = outer.rel_tol * 0.1;
  s.abs_tol = 1e-300;
  s.max_panels = 400;
  s.singularity.reset();
  return s;
}

// Psi_alpha(x', theta) = int psi(y') d^alpha Gamma'(x' - y', theta) dy'
//                      = int d^alpha psi(y') Gamma'(x' - y', theta) dy'.
// The second form keeps full precision as theta -> 0, where the kernel
// derivatives grow like theta^(-|alpha|/2) and cancel.
Jet psi_derivatives(const BoundaryProfile& prof, std::span<const double> y) {
  double r2 = 0.0;
  for (double v : y) r2 += v * v;
  const double r = std::sqrt(r2);
  const auto [f, f1, f2] = prof.psi_radial_jet(r);
  Jet d{};
  d[0] = f;
  if (y.size() == 1) {
    d[slot_d1(0)] = y[0] < 0.0 ? -f1 : f1;
    d[slot_d2(0, 0)] = f2;
    return d;
  }
  if (r == 0.0) {
    d[slot_d2(0, 0)] = d[slot_d2(1, 1)] = f2;
    return d;
  }
  const double e[2] = {y[0] / r, y[1] / r};
  for (int a = 0; a < 2; ++a) {
    d[slot_d1(a)] = f1 * e[a];
    for (int b = a; b < 2; ++b) d[slot_d2(a, b)] = f2 * e[a] * e[b] + f1 * ((a == b ? 1.0 : 0.0) - e[a] * e[b]) / r;
  }
  return d;
}

// Integrand of Psi at y'. The derivatives go on psi only while theta is
// small; otherwise the kernel form is cheaper (psi'' has more structure).
Jet psi_integrand(const BoundaryProfile& prof, std::span<const double> xp, std::span<const double> y, double theta) {
  const int m = static_cast<int>(y.size());
  double d[2];
  for (int k = 0; k < m; ++k) d[k] = xp[k] - y[k];
  if (theta < 1e-2) {
    Jet j = psi_derivatives(prof, y);
    double g = 1.0;
    for (int k = 0; k < m; ++k) g *= gauss1(d[k], theta);
    for (double& v : j) v *= g;
    return j;
  }
  const auto t = heat_time::tangential_jet(std::span<const double>(d, m), theta);
  const double w = prof.psi(y);
  return {w * t.g, w * t.d1[0], w * t.d1[1], w * t.d2[0][0], w * t.d2[0][1], w * t.d2[1][1]};
}

JetResult psi_jets(const VelocityQuery& q, double theta) {
  const auto& prof = q.profile;
  const std::span<const double> xp(q.x.xp.data(), q.x.dim - 1);
  const int m = q.x.dim - 1;
  const double rt = std::sqrt(theta);
  const quad::QuadSpec spec = inner_spec(q.quad);
  JetResult out;
  if (m == 1) {
    const double x1 = q.x.xp[0];
    auto f = [&](double y) {
      const double yy[1] = {y};
      const Jet d = psi_integrand(prof, xp, std::span<const double>(yy, 1), theta);
      return std::array<double, 3>{d[0], d[1], d[3]};
    };
    std::vector<double> pts{-kPsiRadius, 0.0, kPsiRadius};
    for (double k : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
      const double p = x1 + k * rt;
      if (p > -kPsiRadius && p < kPsiRadius) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const auto r = quad::integrate_vec<3>(f, std::span<const double>(pts), spec);
    out.value = {r.value[0], r.value[1], 0.0, r.value[2], 0.0, 0.0};
    out.error = {r.error_estimate[0], r.error_estimate[1], 0.0, r.error_estimate[2], 0.0, 0.0};
    return out;
  }
  // n = 3: polar coordinates on the support disk.
  const double r0 = q.x.tangential_norm();
  const double ang0 = std::atan2(q.x.xp[1], q.x.xp[0]);
  std::vector<double> ang;
  for (int k = 0; k <= 8; ++k) ang.push_back(-M_PI + 2.0 * M_PI * k / 8.0);
  if (r0 > 0.0) {
    ang.push_back(ang0);
    // Angular width of the Gaussian seen from radius r0.
    const double w = 4.0 * rt / r0;
    if (w < M_PI) {
      for (double s : {-2.0, -1.0, 1.0, 2.0}) {
        double a = ang0 + s * w;
        if (a > M_PI) a -= 2.0 * M_PI;
        if (a < -M_PI) a += 2.0 * M_PI;
        ang.push_back(a);
      }
    }
  }
  std::sort(ang.begin(), ang.end());
  ang.erase(std::unique(ang.begin(), ang.end()), ang.end());
  auto ring = [&](double r) {
    auto g = [&](double ph) {
      const double y[2] = {r * std::cos(ph), r * std::sin(ph)};
      Jet d = psi_integrand(prof, xp, std::span<const double>(y, 2), theta);
      for (double& v : d) v *= r;
      return d;
    };
    const auto res = quad::integrate_vec<kSlots>(g, std::span<const double>(ang), spec);
    return std::make_pair(res.value, res.error_estimate);
  };
  std::vector<double> rad{0.0, kPsiRadius};
  for (double k : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
    const double p = r0 + k * rt;
    if (p > 0.0 && p < kPsiRadius) rad.push_back(p);
  }
  std::sort(rad.begin(), rad.end());
  const auto res = quad::integrate_vec_nested<kSlots>(ring, std::span<const double>(rad), spec);
  out.value = res.value;
  out.error = res.error_estimate;
  return out;
}

// Normal-factor kinds used by the channels below.
enum Kind { kQ10, kQ20, kQ11, kQ21, kQB };

struct Channel {
  int slot;
  Kind kind;
  double coef;
};

double pick(const heat_time::NormalFactors& f, Kind k) {
  switch (k) {
    case kQ10: return f.q10;
    case kQ20: return f.q20;
    case kQ11: return f.q11;
    case kQ21: return f.q21;
    default: return 0.0;
  }
}

struct TimeWindow {
  double lo;  // smallest tau = t - s with phi(s) > 0
  double hi;  // largest such tau
  bool empty() const { return !(hi > lo); }
};

TimeWindow window(const VelocityQuery& q) {
  return {std::max(0.0, q.t - 1.0), q.t - q.profile.ramp_lo()};
}

// phi(t - tau) given tau and the distance d = tau - lo to the lower end of
// the window. For t > 1 the lower end is s = 1 and d is exactly 1 - s.
double phi_at(const VelocityQuery& q, double tau, double d) {
  if (q.t >= 1.0) return q.profile.phi_from_end(d);
  return q.profile.phi(q.t - tau);
}

// Exponent of the integrand at the lower end of the tau window.
double lower_exponent(const VelocityQuery& q) {
  if (q.t > 1.0) return q.profile.a();
  if (q.t < 1.0) return -0.5;
  // At t = 1 the data singularity meets the kernel's tau^(-1/2).
  if (q.profile.a() <= -0.5) throw DomainError("velocity diverges at t = 1 when a <= -1/2");
  return q.profile.a() - 0.5;
}

template <int C>
std::array<EvalResult, C> theta_form(const VelocityQuery& q, const std::array<Channel, C>& ch) {
  std::array<EvalResult, C> out{};
  const TimeWindow tw = window(q);
  if (tw.empty() || !(q.x.xn > 0.0)) return out;
  const double xn = q.x.xn;
  const quad::QuadSpec ispec = inner_spec(q.quad);
  const double e_lo = lower_exponent(q);
  const bool need_b = std::any_of(ch.begin(), ch.end(), [](const Channel& c) { return c.kind == kQB; });

  auto kernel_values = [&](double tau, double sigma, double phi) {
    std::array<double, C> v{};
    if (phi == 0.0) return v;
    const auto nf = normal_factors(xn, tau, sigma);
    const double qb = need_b ? gauss1_d1(xn, tau) * gauss1(0.0, sigma) : 0.0;
    for (int c = 0; c < C; ++c) v[c] = phi * (ch[c].kind == kQB ? qb : pick(nf, ch[c].kind));
    return v;
  };

  // R_c(theta) = int phi(t - tau) q_c(tau, theta - tau) dtau over the window
  // part below theta. Split at the midpoint so each half has one endpoint
  // singularity, integrated in the offset from that endpoint.
  auto inner = [&](double D) {
    const double theta = tw.lo + D;
    const bool capped = theta >= tw.hi;
    const double up = capped ? tw.hi : theta;
    const double half = 0.5 * (up - tw.lo);
    std::array<double, C> val{}, err{};
    if (!(half > 0.0)) return std::make_pair(val, err);
    auto lower = [&](double d) {
      const double tau = tw.lo + d;
      return kernel_values(tau, D - d, phi_at(q, tau, d));
    };
    auto upper = [&](double e) {
      const double tau = up - e;
      const double sigma = capped ? theta - tau : e;
      return kernel_values(tau, sigma, phi_at(q, tau, up - tw.lo - e));
    };
    const std::array<double, 2> span{0.0, half};
    const auto a = quad::integrate_vec<C>(lower, span, ispec.with_singularity(quad::Endpoint::lower, e_lo));
    const auto b = capped ? quad::integrate_vec<C>(upper, span, ispec)
                          : quad::integrate_vec<C>(upper, span, ispec.with_singularity(quad::Endpoint::lower, -0.5));
    for (int c = 0; c < C; ++c) {
      val[c] = a.value[c] + b.value[c];
      err[c] = a.error_estimate[c] + b.error_estimate[c];
    }
    return std::make_pair(val, err);
  };

  auto integrand = [&](double xi) {
    const double D = std::exp(xi);
    const double theta = tw.lo + D;
    std::array<double, C> val{}, err{};
    const auto [rv, re] = inner(D);
    bool any = false;
    for (int c = 0; c < C; ++c) any = any || rv[c] != 0.0;
    if (!any) return std::make_pair(val, err);
    const JetResult psi = psi_jets(q, theta);
    for (int c = 0; c < C; ++c) {
      const double p = psi.value[ch[c].slot], pe = psi.error[ch[c].slot];
      val[c] = ch[c].coef * p * rv[c] * D;
      err[c] = std::abs(ch[c].coef) * (std::abs(p) * re[c] + pe * std::abs(rv[c])) * D;
    }
    return std::make_pair(val, err);
  };

  // Below theta_cut the Gaussian factors are under exp(-40).
  const double rout = std::max(0.0, q.x.tangential_norm() - kPsiRadius);
  const double theta_cut = std::max(rout * rout, xn * xn) / 160.0;
  const double scale = std::max({q.t, xn * xn, q.x.tangential_norm() * q.x.tangential_norm(), 1.0});
  const double d_lo = std::max(theta_cut - tw.lo, 1e-18 * std::max(q.t, 1.0));
  const double d_hi = 1e12 * scale;
  std::vector<double> breaks{tw.hi - tw.lo};
  if (tw.lo > 0.0) breaks.push_back(tw.lo);
  const auto xi = quad::log_points(d_lo, d_hi, breaks, 2.0);
  quad::QuadSpec ospec = q.quad.plain();
  const auto r = quad::integrate_vec_nested<C>(integrand, std::span<const double>(xi), ospec);
  const auto f_lo = integrand(xi.front()).first;
  const auto f_hi = integrand(xi.back()).first;
  for (int c = 0; c < C; ++c) {
    out[c].value = r.value[c];
    out[c].error_estimate = r.error_estimate[c] + 2.0 * std::abs(f_lo[c]) + 2.0 * std::abs(f_hi[c]);
    out[c].subdivisions = r.subdivisions;
  }
  return out;
}

// Channel for w^L_ij (1-based indices).
Channel l_channel(int i, int j, int n) {
  const bool it = i < n, jt = j < n;
  if (it && jt) return {slot_d2(i - 1, j - 1), kQ10, -4.0};
  if (it) return {slot_d1(i - 1), kQ20, -4.0};
  if (jt) return {slot_d1(j - 1), kQ11, 4.0};
  return {0, kQ21, 4.0};
}

Channel b_channel(int i) { return {slot_d1(i - 1), kQB, -4.0}; }

EvalResult w_g(const VelocityQuery& q) {
  const TimeWindow tw = window(q);
  if (tw.empty() || !(q.x.xn > 0.0)) return {};
  const double xn = q.x.xn;
  const quad::QuadSpec ispec = inner_spec(q.quad);
  auto f = [&](double tau, double d) {
    const double phi = phi_at(q, tau, d);
    const double g = gauss1_d1(xn, tau);
    if (phi == 0.0 || g == 0.0) return EvalResult{};
    const JetResult psi = psi_jets(q, tau);
    return EvalResult{-2.0 * phi * g * psi.value[0], 2.0 * std::abs(phi * g) * psi.error[0], 0};
  };
  const double half = 0.5 * (tw.hi - tw.lo);
  quad::QuadSpec spec = q.quad.lenient().plain();
  if (q.quad.on_failure == quad::OnFailure::raise) spec.on_failure = quad::OnFailure::raise;
  (void)ispec;
  EvalResult lo, hi;
  {
    // Lower half in the offset d = tau - lo with the phi endpoint power.
    const double e = q.t > 1.0 ? q.profile.a() : 0.0;
    const double p = 1.0 / (1.0 + e);
    auto g = [&](double u) {
      const double d = half * std::pow(u, p);
      const double jac = half * p * std::pow(u, p - 1.0);
      EvalResult r = f(tw.lo + d, d);
      r.value *= jac;
      r.error_estimate *= jac;
      return r;
    };
    lo = quad::integrate_nested(g, 0.0, 1.0, spec);
  }
  {
    auto g = [&](double tau) { return f(tau, tau - tw.lo); };
    hi = quad::integrate_nested(g, tw.lo + half, tw.hi, spec);
  }
  return {lo.value + hi.value, lo.error_estimate + hi.error_estimate, lo.subdivisions + hi.subdivisions};
}

EvalResult w_n_instant(int i, const VelocityQuery& q) {
  const double phi = q.profile.phi(q.t);
  if (phi == 0.0) return {};
  const int n = q.x.dim;
  const int m = n - 1;
  const double area = n * kernels::unit_ball_volume(n);
  auto f = [&](std::span<const double> y) {
    double d[3], r2 = 0.0;
    for (int k = 0; k < m; ++k) d[k] = q.x.xp[k] - y[k];
    d[m] = q.x.xn;
    for (int k = 0; k < n; ++k) r2 += d[k] * d[k];
    return q.profile.psi(y) * d[i - 1] / (area * std::pow(r2, 0.5 * n));
  };
  quad::QuadSpec spec = q.quad;
  spec.abs_tol = q.quad.abs_tol / (2.0 * phi);
  EvalResult r = quad::integrate_disk(f, kPsiRadius, m, spec);
  r.value *= 2.0 * phi;
  r.error_estimate *= 2.0 * phi;
  return r;
}

void check(const VelocityQuery& q) {
  if (q.profile.dim() != q.x.dim) throw DomainError("profile and point dimensions differ");
  if (!(q.t > 0.0)) throw DomainError("velocity needs t > 0");
}

EvalResult add(EvalResult a, const EvalResult& b, double w = 1.0) {
  a.value += w * b.value;
  a.error_estimate += std::abs(w) * b.error_estimate;
  a.subdivisions += b.subdivisions;
  return a;
}

}  // namespace

EvalResult w_part(Piece piece, int i, int j, const VelocityQuery& q) {
  check(q);
  const int n = q.x.dim;
  switch (piece) {
    case Piece::L:
      return theta_form<1>(q, {l_channel(i, j, n)})[0];
    case Piece::Ltilde: {
      // w^(L)_ij = w^L_ij + delta_ij / n w^G - [i < n, j = n] w^B_i
      if (i < n && j == n) {
        const auto r = theta_form<2>(q, {l_channel(i, j, n), b_channel(i)});
        return add(r[0], r[1], -1.0);
      }
      EvalResult r = theta_form<1>(q, {l_channel(i, j, n)})[0];
      if (i == j) r = add(r, w_g(q), 1.0 / n);
      return r;
    }
    case Piece::B:
      if (i >= n) throw DomainError("w^B needs i < n");
      return theta_form<1>(q, {b_channel(i)})[0];
    case Piece::N:
      return w_n_instant(i, q);
    case Piece::G:
      return w_g(q);
  }
  return {};
}

VelocitySample w_tangential(int i, const VelocityQuery& q) {
  check(q);
  const int n = q.x.dim;
  if (i < 1 || i >= n) throw DomainError("w_tangential needs 1 <= i < n");
  const auto r = theta_form<2>(q, {l_channel(i, n, n), b_channel(i)});
  VelocitySample s;
  s.parts["Ltilde"] = add(r[0], r[1], -1.0);
  s.parts["B"] = r[1];
  s.parts["N"] = w_n_instant(i, q);
  EvalResult tot = add(add(s.parts["Ltilde"], s.parts["B"]), s.parts["N"]);
  s.value = tot.value;
  s.error_estimate = tot.error_estimate;
  return s;
}

namespace {

// sum_{i<n} w^L_ii in one pass.
EvalResult trace_l(const VelocityQuery& q) {
  const int n = q.x.dim;
  if (n == 2) return theta_form<1>(q, {l_channel(1, 1, 2)})[0];
  const auto r = theta_form<2>(q, {l_channel(1, 1, 3), l_channel(2, 2, 3)});
  return add(r[0], r[1]);
}

}  // namespace

VelocitySample w_normal(const VelocityQuery& q) {
  check(q);
  const int n = q.x.dim;
  const EvalResult lsum = trace_l(q);
  const EvalResult g = w_g(q);
  VelocitySample s;
  // sum_{i<n} w^(L)_ii = sum w^L_ii + (n-1)/n w^G
  s.parts["Ltilde_sum"] = add(lsum, g, (n - 1.0) / n);
  s.parts["N"] = w_n_instant(n, q);
  s.parts["G"] = g;
  EvalResult tot;
  tot.value = -s.parts["Ltilde_sum"].value + s.parts["N"].value + (n - 1.0) / n * g.value;
  // The G contributions cancel exactly, so only the L and N errors count.
  tot.error_estimate = lsum.error_estimate + s.parts["N"].error_estimate;
  s.value = tot.value;
  s.error_estimate = tot.error_estimate;
  return s;
}

VelocitySample w_normal_untilded(const VelocityQuery& q) {
  check(q);
  const int n = q.x.dim;
  VelocitySample s;
  s.parts["L_sum"] = trace_l(q);
  s.parts["N"] = w_n_instant(n, q);
  const EvalResult tot = add(s.parts["N"], s.parts["L_sum"], -1.0);
  s.value = tot.value;
  s.error_estimate = tot.error_estimate;
  return s;
}

VelocitySample w_normal_untilded_with_wg(const VelocityQuery& q) {
  VelocitySample s = w_normal_untilded(q);
  s.parts["G"] = w_g(q);
  s.value += s.parts["G"].value;
  s.error_estimate += s.parts["G"].error_estimate;
  return s;
}

VelocitySample w_component(const VelocityQuery& q) {
  return q.component == q.x.dim ? w_normal(q) : w_tangential(q.component, q);
}

VelocitySample w_direct_oracle(int i, const VelocityQuery& q) {
  check(q);
  const int n = q.x.dim;
  if (n != 2) throw DomainError("the direct oracle is implemented for n = 2");
  if (i < 1 || i > n) throw DomainError("component index out of range");
  VelocitySample s;
  const TimeWindow tw = window(q);
  s.parts["N"] = w_n_instant(i, q);
  EvalResult conv;
  if (!tw.empty() && q.x.xn > 0.0) {
    quad::QuadSpec lspec = q.quad.lenient().plain();
    lspec.rel_tol = q.quad.rel_tol * 0.1;
    lspec.abs_tol = q.quad.abs_tol * 1e-3;
    // int psi(y) K_in(x - y, tau) dy, with K_in = -2 delta_in d_n Gamma + 4 L_in.
    auto space = [&](double tau) {
      auto g = [&](double y) {
        const double w = q.profile.psi_radial(std::abs(y));
        if (w == 0.0) return EvalResult{};
        const SpacePoint z = SpacePoint::planar(q.x.xp[0] - y, q.x.xn);
        EvalResult k = green::L_ij_physical({i, 2, z, tau}, lspec);
        k.value *= 4.0 * w;
        k.error_estimate *= 4.0 * w;
        if (i == 2) k.value -= 2.0 * w * gauss1_d1(q.x.xn, tau) * gauss1(z.xp[0], tau);
        return k;
      };
      const std::array<double, 3> pts{-kPsiRadius, 0.0, kPsiRadius};
      return quad::integrate_nested(g, std::span<const double>(pts), lspec);
    };
    quad::QuadSpec tspec = q.quad.lenient().plain();
    const double e_lo = lower_exponent(q);
    const double half = 0.5 * (tw.hi - tw.lo);
    const double p = 1.0 / (1.0 + e_lo);
    auto lower = [&](double u) {
      const double d = half * std::pow(u, p);
      const double jac = half * p * std::pow(u, p - 1.0);
      const double tau = tw.lo + d;
      const double phi = phi_at(q, tau, d);
      if (phi == 0.0) return EvalResult{};
      EvalResult r = space(tau);
      r.value *= phi * jac;
      r.error_estimate *= phi * jac;
      return r;
    };
    auto upper = [&](double tau) {
      const double phi = phi_at(q, tau, tau - tw.lo);
      if (phi == 0.0) return EvalResult{};
      EvalResult r = space(tau);
      r.value *= phi;
      r.error_estimate *= phi;
      return r;
    };
    conv = add(quad::integrate_nested(lower, 0.0, 1.0, tspec),
               quad::integrate_nested(upper, tw.lo + half, tw.hi, tspec));
  }
  s.parts["K"] = conv;
  const EvalResult tot = add(conv, s.parts["N"]);
  s.value = tot.value;
  s.error_estimate = tot.error_estimate;
  return s;
}

}  // namespace hsstokes::velocity

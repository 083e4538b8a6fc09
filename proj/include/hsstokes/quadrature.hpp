// Adaptive Gauss-Kronrod quadrature with error estimates.
//
// Everything here is header-only because the integrands are lambdas nested
// three or four deep in the velocity code; a type-erased call per node would
// dominate the runtime of the inner loops.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsstokes {

struct EvalResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

// Tolerance was not met before the depth or panel budget ran out.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, EvalResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const EvalResult& partial() const noexcept { return partial_; }

 private:
  EvalResult partial_;
};

// The integrand produced a NaN or infinity.
class EvaluationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace quad {

enum class Endpoint { lower, upper };

// Integrand behaves like |s - endpoint|^exponent, exponent > -1.
struct Singularity {
  Endpoint at = Endpoint::lower;
  double exponent = 0.0;
};

enum class OnFailure { raise, best_effort };

// What rel_tol is relative to: |integral|, or the integral of |f|. The second
// stays meaningful when the integrand cancels to (nearly) zero.
enum class RelativeTo { value, magnitude };

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 40;
  int max_panels = 4000;
  std::optional<Singularity> singularity;
  OnFailure on_failure = OnFailure::raise;
  RelativeTo rel_to = RelativeTo::value;

  QuadSpec with_singularity(Endpoint at, double exponent) const {
    QuadSpec s = *this;
    s.singularity = Singularity{at, exponent};
    return s;
  }
  QuadSpec plain() const {
    QuadSpec s = *this;
    s.singularity.reset();
    return s;
  }
  QuadSpec tightened(double factor) const {
    QuadSpec s = *this;
    s.abs_tol *= factor;
    s.rel_tol *= factor;
    return s;
  }
  QuadSpec lenient() const {
    QuadSpec s = *this;
    s.on_failure = OnFailure::best_effort;
    return s;
  }
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452162, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <int K>
using Vals = std::array<double, K>;

template <int K>
struct Panel {
  double a, b;
  Vals<K> value;
  Vals<K> error;
  int depth;
  Vals<K> mag{};  // integral of |f| over the panel
};

template <int K>
inline void check_finite(const Vals<K>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw EvaluationFailure("integrand returned a non-finite value");
}

// QUADPACK's error heuristic: |K - G| rescaled by the spread of the integrand.
template <int K, class F>
Panel<K> gk21(F& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Vals<K> fc = f(c);
  check_finite<K>(fc);
  Vals<K> rk, rg{}, rabs, rasc;
  std::array<Vals<K>, 10> f1, f2;
  for (int k = 0; k < K; ++k) {
    rk[k] = fc[k] * kWgk[10];
    rabs[k] = std::abs(rk[k]);
  }
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = f(c - dx);
    f2[j] = f(c + dx);
    check_finite<K>(f1[j]);
    check_finite<K>(f2[j]);
    for (int k = 0; k < K; ++k) {
      const double s = f1[j][k] + f2[j][k];
      rk[k] += kWgk[j] * s;
      rabs[k] += kWgk[j] * (std::abs(f1[j][k]) + std::abs(f2[j][k]));
      if (j % 2 == 1) rg[k] += kWg[j / 2] * s;
    }
  }
  for (int k = 0; k < K; ++k) {
    const double mean = 0.5 * rk[k];
    double asc = kWgk[10] * std::abs(fc[k] - mean);
    for (int j = 0; j < 10; ++j)
      asc += kWgk[j] * (std::abs(f1[j][k] - mean) + std::abs(f2[j][k] - mean));
    rasc[k] = asc;
  }
  Panel<K> p{a, b, {}, {}, depth};
  const double ah = std::abs(h);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int k = 0; k < K; ++k) {
    p.value[k] = rk[k] * h;
    double err = std::abs((rk[k] - rg[k]) * h);
    const double asc = rasc[k] * ah;
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double floor = 50.0 * eps * rabs[k] * ah;
    if (floor > err) err = floor;
    p.error[k] = err;
    p.mag[k] = rabs[k] * ah;
  }
  return p;
}

template <int K>
struct Outcome {
  Vals<K> value{};
  Vals<K> error{};
  int subdivisions = 0;
  bool converged = true;
};

// Global adaptive refinement over an initial partition. Only the first
// `controlled` components steer refinement; the rest ride along (used to carry
// the error of an inner integral through an outer one).
template <int K, class F>
Outcome<K> adapt(F& f, std::span<const double> points, const QuadSpec& spec, int controlled) {
  std::vector<Panel<K>> panels;
  panels.reserve(64);
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (points[i + 1] > points[i]) panels.push_back(gk21<K>(f, points[i], points[i + 1], 0));

  Outcome<K> out;
  Vals<K> m{};
  auto totals = [&](Vals<K>& v, Vals<K>& e) {
    v.fill(0.0);
    e.fill(0.0);
    m.fill(0.0);
    for (const auto& p : panels)
      for (int k = 0; k < K; ++k) {
        v[k] += p.value[k];
        e[k] += p.error[k];
        m[k] += p.mag[k];
      }
  };
  Vals<K> v, e;
  totals(v, e);
  const bool by_mag = spec.rel_to == RelativeTo::magnitude;
  while (true) {
    bool ok = true;
    std::array<double, K> tol;
    for (int k = 0; k < controlled; ++k) {
      tol[k] = std::max({spec.abs_tol, spec.rel_tol * (by_mag ? m[k] : std::abs(v[k])), std::numeric_limits<double>::min()});
      if (e[k] > tol[k]) ok = false;
    }
    if (ok) break;
    if (static_cast<int>(panels.size()) >= spec.max_panels) {
      out.converged = false;
      break;
    }
    // Worst splittable panel relative to each component's tolerance.
    int worst = -1;
    double worst_score = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& p = panels[i];
      if (p.depth >= spec.max_depth) continue;
      const double mid = 0.5 * (p.a + p.b);
      if (!(mid > p.a && mid < p.b)) continue;
      double score = 0.0;
      for (int k = 0; k < controlled; ++k) score = std::max(score, p.error[k] / tol[k]);
      if (score > worst_score) {
        worst_score = score;
        worst = static_cast<int>(i);
      }
    }
    if (worst < 0) {
      out.converged = false;
      break;
    }
    const Panel<K> p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = gk21<K>(f, p.a, mid, p.depth + 1);
    panels.push_back(gk21<K>(f, mid, p.b, p.depth + 1));
    ++out.subdivisions;
    for (int k = 0; k < K; ++k) {
      v[k] += panels[worst].value[k] + panels.back().value[k] - p.value[k];
      e[k] += panels[worst].error[k] + panels.back().error[k] - p.error[k];
      m[k] += panels[worst].mag[k] + panels.back().mag[k] - p.mag[k];
    }
  }
  // Re-sum in panel order so the result does not depend on the update history.
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  totals(out.value, out.error);
  return out;
}

// Maps [a, b] to [0, 1] with u = ((s - a)/(b - a))^(1+alpha) (or the mirror
// image), which turns an endpoint power alpha into a bounded integrand.
// s itself is rounded, so near a nonzero endpoint the distance to it is only
// known to an ulp of the endpoint; integrate_log_offset avoids that. Points
// are kept strictly inside so f never sees the singular endpoint.
template <class F>
auto desingularize(F& f, double a, double b, const Singularity& s) {
  const double p = 1.0 / (1.0 + s.exponent);
  const double len = b - a;
  const bool lower = s.at == Endpoint::lower;
  const double a_in = std::nextafter(a, b), b_in = std::nextafter(b, a);
  return [&f, p, len, lower, a_in, b_in, a, b](double u) {
    const double d = len * std::pow(u, p);
    const double jac = len * p * std::pow(u, p - 1.0);
    auto r = f(lower ? std::max(a + d, a_in) : std::min(b - d, b_in));
    for (auto& x : r) x *= jac;
    return r;
  };
}

template <int K, class F>
Outcome<K> run(F& f, std::span<const double> points, const QuadSpec& spec, int controlled) {
  if (spec.singularity && points.size() == 2) {
    if (spec.singularity->exponent <= -1.0)
      throw std::domain_error("endpoint exponent must exceed -1");
    auto g = desingularize(f, points[0], points[1], *spec.singularity);
    const std::array<double, 2> unit{0.0, 1.0};
    return adapt<K>(g, unit, spec, controlled);
  }
  return adapt<K>(f, points, spec, controlled);
}

inline void check_points(std::span<const double> points) {
  if (points.size() < 2) throw std::invalid_argument("need at least two integration points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i] <= points[i + 1]) || !std::isfinite(points[i]) || !std::isfinite(points[i + 1]))
      throw std::invalid_argument("integration points must be finite and non-decreasing");
}

inline EvalResult finish(double value, double error, int subdivisions, bool converged,
                         const QuadSpec& spec) {
  EvalResult r{value, error, subdivisions};
  if (!converged && spec.on_failure == OnFailure::raise)
    throw NonConvergence("quadrature tolerance not met", r);
  return r;
}

}  // namespace detail

// Integral of f over [points.front(), points.back()] with the interior points
// used as the initial partition (breakpoints).
template <class F>
EvalResult integrate_1d(F&& f, std::span<const double> points, const QuadSpec& spec = {}) {
  detail::check_points(points);
  auto g = [&f](double s) { return detail::Vals<1>{static_cast<double>(f(s))}; };
  auto out = detail::run<1>(g, points, spec, 1);
  return detail::finish(out.value[0], out.error[0], out.subdivisions, out.converged, spec);
}

template <class F>
EvalResult integrate_1d(F&& f, double a, double b, const QuadSpec& spec = {}) {
  if (a == b) return {};
  if (a > b) {
    auto r = integrate_1d(f, b, a, spec.singularity
                                       ? spec.with_singularity(spec.singularity->at == Endpoint::lower
                                                                   ? Endpoint::upper
                                                                   : Endpoint::lower,
                                                               spec.singularity->exponent)
                                       : spec);
    r.value = -r.value;
    return r;
  }
  const std::array<double, 2> pts{a, b};
  return integrate_1d(f, std::span<const double>(pts), spec);
}

// Integral whose integrand is itself a quadrature result. The inner error is
// integrated alongside the value and added to the outer estimate.
template <class F>
EvalResult integrate_nested(F&& f, std::span<const double> points, const QuadSpec& spec = {}) {
  detail::check_points(points);
  auto g = [&f](double s) {
    const EvalResult r = f(s);
    return detail::Vals<2>{r.value, r.error_estimate};
  };
  auto out = detail::run<2>(g, points, spec, 1);
  return detail::finish(out.value[0], out.error[0] + std::abs(out.value[1]), out.subdivisions,
                        out.converged, spec);
}

template <class F>
EvalResult integrate_nested(F&& f, double a, double b, const QuadSpec& spec = {}) {
  if (a == b) return {};
  const std::array<double, 2> pts{a, b};
  return integrate_nested(f, std::span<const double>(pts), spec);
}

// Vector-valued integral of K components sharing one set of panels.
template <int K>
struct VecResult {
  std::array<double, K> value{};
  std::array<double, K> error_estimate{};
  int subdivisions = 0;
};

template <int K, class F>
VecResult<K> integrate_vec(F&& f, std::span<const double> points, const QuadSpec& spec = {}) {
  detail::check_points(points);
  auto out = detail::run<K>(f, points, spec, K);
  if (!out.converged && spec.on_failure == OnFailure::raise) {
    EvalResult partial{out.value[0], out.error[0], out.subdivisions};
    throw NonConvergence("vector quadrature tolerance not met", partial);
  }
  return {out.value, out.error, out.subdivisions};
}

// Vector integral whose integrand is itself a quadrature result: f returns a
// pair (values, errors). The integrated inner errors are added to the result.
template <int K, class F>
VecResult<K> integrate_vec_nested(F&& f, std::span<const double> points, const QuadSpec& spec = {}) {
  detail::check_points(points);
  auto g = [&f](double s) {
    const auto [v, e] = f(s);
    detail::Vals<2 * K> out;
    for (int k = 0; k < K; ++k) {
      out[k] = v[k];
      out[K + k] = e[k];
    }
    return out;
  };
  auto out = detail::run<2 * K>(g, points, spec, K);
  VecResult<K> r;
  r.subdivisions = out.subdivisions;
  for (int k = 0; k < K; ++k) {
    r.value[k] = out.value[k];
    r.error_estimate[k] = out.error[k] + std::abs(out.value[K + k]);
  }
  if (!out.converged && spec.on_failure == OnFailure::raise)
    throw NonConvergence("vector quadrature tolerance not met", {r.value[0], r.error_estimate[0], r.subdivisions});
  return r;
}

// Partition of [ln d_lo, ln d_hi] into panels at most `width` wide, with the
// logarithms of the given offsets as extra breakpoints.
inline std::vector<double> log_points(double d_lo, double d_hi, std::span<const double> offset_breaks = {},
                                      double width = 1.0) {
  if (!(d_lo > 0.0) || !(d_hi > d_lo)) throw std::invalid_argument("log map needs 0 < d_lo < d_hi");
  const double lo = std::log(d_lo), top = std::log(d_hi);
  std::vector<double> marks;
  for (double b : offset_breaks)
    if (b > d_lo && b < d_hi) marks.push_back(std::log(b));
  for (double x = lo + width; x < top; x += width) marks.push_back(x);
  std::sort(marks.begin(), marks.end());
  std::vector<double> xi{lo};
  for (double m : marks)
    if (m > xi.back() + 1e-9 && m < top - 1e-9) xi.push_back(m);
  xi.push_back(top);
  return xi;
}

// Integral over [origin + d_lo, origin + d_hi] in the variable xi = ln(s - origin).
// Suited to integrands with structure on every scale of s - origin, including
// power singularities at the origin. f receives the offset d = s - origin so the
// caller can evaluate singular factors without cancellation. Extra breakpoints
// are given as offsets.
template <class F>
EvalResult integrate_log_offset(F&& f, double d_lo, double d_hi, const QuadSpec& spec = {},
                                std::span<const double> offset_breaks = {}) {
  const auto xi = log_points(d_lo, d_hi, offset_breaks);
  auto g = [&f](double x) {
    const double d = std::exp(x);
    return static_cast<double>(f(d)) * d;
  };
  return integrate_1d(g, std::span<const double>(xi), spec.plain());
}

template <class F>
EvalResult integrate_log_offset_nested(F&& f, double d_lo, double d_hi, const QuadSpec& spec = {},
                                       std::span<const double> offset_breaks = {}) {
  const auto xi = log_points(d_lo, d_hi, offset_breaks);
  auto g = [&f](double x) {
    const double d = std::exp(x);
    EvalResult r = f(d);
    r.value *= d;
    r.error_estimate *= d;
    return r;
  };
  return integrate_nested(g, std::span<const double>(xi), spec.plain());
}

// Integral over the ball of the given radius in R^m, m = 1 or 2 (the tangential
// space for n = 2, 3). The disk uses polar coordinates: adaptive in the radius,
// eight uniform starting panels in the angle.
template <class F>
EvalResult integrate_disk(F&& f, double radius, int m, const QuadSpec& spec = {}) {
  if (m == 1) {
    auto g = [&f](double y) {
      const double p[1] = {y};
      return static_cast<double>(f(std::span<const double>(p, 1)));
    };
    const std::array<double, 3> pts{-radius, 0.0, radius};
    return integrate_1d(g, std::span<const double>(pts), spec);
  }
  if (m != 2) throw std::invalid_argument("integrate_disk supports dimension 1 or 2");
  QuadSpec inner = spec.lenient();
  inner.abs_tol = spec.abs_tol / (radius * radius + 1.0);
  auto ring = [&](double r) {
    std::array<double, 9> ang;
    for (int k = 0; k <= 8; ++k) ang[k] = 2.0 * M_PI * k / 8.0;
    auto g = [&](double th) {
      const double p[2] = {r * std::cos(th), r * std::sin(th)};
      return static_cast<double>(f(std::span<const double>(p, 2)));
    };
    EvalResult res = integrate_1d(g, std::span<const double>(ang), inner);
    res.value *= r;
    res.error_estimate *= r;
    return res;
  };
  return integrate_nested(ring, 0.0, radius, spec);
}

// Where the principal-value integrand has features away from the singular
// point. Radii are distances from the singular point, angles are in [0, pi).
struct PvHints {
  std::vector<double> radial_breaks;
  std::vector<double> angular_breaks;
  double tail_bound = 0.0;  // analytic bound on the part beyond outer_cutoff
};

// Principal value over R^m (m = 1, 2) of an integrand with an odd, homogeneous
// singularity of degree -m at `singular_at`. Pairing each point with its mirror
// image through the singular point cancels the singular part exactly, leaving
// a bounded integrand on the ball of radius outer_cutoff.
template <class F>
EvalResult integrate_pv_antisym(F&& f, std::span<const double> singular_at, double outer_cutoff,
                                const QuadSpec& spec = {}, const PvHints& hints = {}) {
  const int m = static_cast<int>(singular_at.size());
  std::vector<double> rad{0.0};
  std::vector<double> rb = hints.radial_breaks;
  std::sort(rb.begin(), rb.end());
  for (double r : rb)
    if (r > rad.back() && r < outer_cutoff) rad.push_back(r);
  rad.push_back(outer_cutoff);
  EvalResult res;
  if (m == 1) {
    const double z0 = singular_at[0];
    auto g = [&](double u) {
      const double p[1] = {z0 + u}, q[1] = {z0 - u};
      return static_cast<double>(f(std::span<const double>(p, 1))) +
             static_cast<double>(f(std::span<const double>(q, 1)));
    };
    res = integrate_1d(g, std::span<const double>(rad), spec);
  } else if (m == 2) {
    std::vector<double> ang;
    for (int k = 0; k <= 8; ++k) ang.push_back(M_PI * k / 8.0);
    for (double a : hints.angular_breaks) {
      double w = std::fmod(a, M_PI);
      if (w < 0) w += M_PI;
      ang.push_back(w);
    }
    std::sort(ang.begin(), ang.end());
    ang.erase(std::unique(ang.begin(), ang.end()), ang.end());
    QuadSpec inner = spec.lenient();
    inner.abs_tol = spec.abs_tol / (outer_cutoff + 1.0);
    auto ring = [&](double r) {
      auto g = [&](double th) {
        const double c = r * std::cos(th), s = r * std::sin(th);
        const double p[2] = {singular_at[0] + c, singular_at[1] + s};
        const double q[2] = {singular_at[0] - c, singular_at[1] - s};
        return static_cast<double>(f(std::span<const double>(p, 2))) +
               static_cast<double>(f(std::span<const double>(q, 2)));
      };
      EvalResult e = integrate_1d(g, std::span<const double>(ang), inner);
      e.value *= r;
      e.error_estimate *= r;
      return e;
    };
    res = integrate_nested(ring, std::span<const double>(rad), spec);
  } else {
    throw std::invalid_argument("integrate_pv_antisym supports dimension 1 or 2");
  }
  res.error_estimate += hints.tail_bound;
  return res;
}

}  // namespace quad
}  // namespace hsstokes

#include "hsstokes/reversal.hpp"

#include <algorithm>
#include <cmath>

#include "hsstokes/parallel.hpp"
#include "hsstokes/velocity.hpp"

namespace hsstokes::reversal {

FieldProbe velocity_probe(int component, std::vector<double> x_prime, const BoundaryProfile& profile) {
  if (static_cast<int>(x_prime.size()) != profile.dim() - 1)
    throw DomainError("tangential position does not match the profile dimension");
  if (component < 1 || component > profile.dim()) throw DomainError("component index out of range");
  return [component, x_prime = std::move(x_prime), profile](double xn, double t, const quad::QuadSpec& spec) {
    velocity::VelocityQuery q{component, SpacePoint::make(x_prime, xn), t, profile, spec};
    const auto s = velocity::w_component(q);
    return EvalResult{s.value, s.error_estimate, 0};
  };
}

std::vector<int> ScanResult::pattern() const {
  std::vector<int> p;
  for (const auto& s : samples)
    if (s.sign != 0 && (p.empty() || p.back() != s.sign)) p.push_back(s.sign);
  return p;
}

SignedSample signed_sample(const FieldProbe& f, double xn, double t, const ScanOptions& opt) {
  quad::QuadSpec spec = opt.quad.lenient();
  for (int attempt = 0;; ++attempt) {
    const EvalResult r = f(xn, t, spec);
    if (r.value == 0.0 && r.error_estimate == 0.0) return {xn, 0.0, 0.0, 0};
    if (std::abs(r.value) > opt.margin * r.error_estimate) return {xn, r.value, r.error_estimate, r.value > 0.0 ? 1 : -1};
    if (attempt >= opt.max_tightening)
      throw IndeterminateRegion("sample stays within its error bar after tightening", xn, t);
    spec = spec.tightened(opt.tighten_factor);
    spec.max_panels *= 2;
  }
}

std::vector<SignInterval> intervals_of(const std::vector<SignedSample>& s) {
  struct Run {
    int sign;
    double first, last;
  };
  std::vector<Run> runs;
  for (const auto& p : s) {
    if (p.sign == 0) continue;
    if (runs.empty() || runs.back().sign != p.sign) runs.push_back({p.sign, p.xn, p.xn});
    else runs.back().last = p.xn;
  }
  std::vector<SignInterval> out;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    SignInterval iv;
    iv.kind = runs[k].sign < 0 ? IntervalKind::minus_plus : IntervalKind::plus_minus;
    iv.y1 = runs[k].last;
    iv.y2 = runs[k + 1].first;
    iv.lo = runs[k].first;
    iv.hi = runs[k + 1].last;
    out.push_back(iv);
  }
  return out;
}

ScanResult sign_scan(const FieldProbe& f, double t, const std::vector<double>& grid, const ScanOptions& opt) {
  if (grid.size() < 16) throw std::invalid_argument("sign_scan needs at least 16 grid points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1])) throw std::invalid_argument("sign_scan grid must be strictly increasing");
  ScanResult r;
  r.samples.resize(grid.size());
  parallel_for(grid.size(), opt.threads, [&](std::size_t i) { r.samples[i] = signed_sample(f, grid[i], t, opt); });
  r.intervals = intervals_of(r.samples);
  return r;
}

namespace {

double midpoint(double lo, double hi) { return lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi); }

}  // namespace

ZeroRecord locate_zero(const FieldProbe& f, double t, double lo, double hi, const ScanOptions& opt, double rel_width) {
  if (!(lo < hi)) throw LostBracket("bracket must satisfy lo < hi");
  SignedSample a = signed_sample(f, lo, t, opt);
  SignedSample b = signed_sample(f, hi, t, opt);
  if (a.sign == 0 || b.sign == 0 || a.sign == b.sign) throw LostBracket("bracket does not straddle a sign change");
  // Points near the zero sit inside their error bar by construction; one
  // tightening is enough to tell a resolved sign from the zero itself.
  ScanOptions near = opt;
  near.max_tightening = std::min(opt.max_tightening, 1);
  ZeroRecord z;
  z.t = t;
  auto done = [&](double x, const EvalResult& r) {
    z.x_n_star = x;
    z.lo = a.xn;
    z.hi = b.xn;
    z.residual = std::abs(r.value);
    z.error = r.error_estimate;
    return z;
  };
  auto probe = [&](double x, SignedSample& out) {
    try {
      out = signed_sample(f, x, t, near);
      return out.sign != 0;
    } catch (const IndeterminateRegion&) {
      // Inside the error bar: x is a zero to working accuracy.
      out = {x, 0.0, 0.0, 0};
      return false;
    } catch (const NonConvergence& e) {
      throw LostBracket(std::string("midpoint evaluation failed: ") + e.what());
    }
  };
  while (b.xn - a.xn > rel_width * midpoint(a.xn, b.xn)) {
    const double m = midpoint(a.xn, b.xn);
    SignedSample s;
    if (!probe(m, s)) {
      const EvalResult r = f(m, t, opt.quad.lenient());
      return done(m, r);
    }
    (s.sign == a.sign ? a : b) = s;
  }
  // Illinois steps inside the final bracket.
  double fa = a.value, fb = b.value;
  double x = a.xn - fa * (b.xn - a.xn) / (fb - fa);
  int side = 0;
  for (int it = 0; it < 6; ++it) {
    x = a.xn - fa * (b.xn - a.xn) / (fb - fa);
    SignedSample s;
    if (!probe(x, s)) break;
    if (std::abs(s.value) <= opt.margin * s.error) break;
    if (s.sign == a.sign) {
      a = s;
      fa = s.value;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = s;
      fb = s.value;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  const EvalResult r = f(x, t, opt.quad.lenient());
  return done(x, r);
}

namespace {

// Wall-adjacent minus_plus interval, if the first run is negative.
std::optional<SignInterval> wall_interval(const ScanResult& s) {
  if (s.intervals.empty()) return std::nullopt;
  const auto& iv = s.intervals.front();
  if (iv.kind != IntervalKind::minus_plus) return std::nullopt;
  if (iv.lo != s.samples.front().xn) return std::nullopt;
  return iv;
}

}  // namespace

std::vector<BetaPoint> beta_curves(const FieldProbe& f, const std::vector<double>& t_grid,
                                   const std::vector<double>& xn_grid, const ScanOptions& opt, bool refine) {
  std::vector<BetaPoint> out;
  for (double t : t_grid) {
    BetaPoint p;
    p.t = t;
    const auto scan = sign_scan(f, t, xn_grid, opt);
    if (const auto iv = wall_interval(scan)) {
      if (refine) {
        const auto z = locate_zero(f, t, iv->y1, iv->y2, opt);
        p.beta1 = z.lo;
        p.beta2 = z.hi;
      } else {
        p.beta1 = iv->y1;
        p.beta2 = iv->y2;
      }
    }
    out.push_back(p);
  }
  return out;
}

SeparationVerdict classify_separation(const FieldProbe& f, const SeparationWindows& w, const ScanOptions& opt) {
  SeparationVerdict v;
  const double delta = w.delta > 0.0 ? w.delta : w.xn_grid.back();
  try {
    // (i): positive prefix before t = 1.
    std::vector<double> tb = w.t_before;
    std::sort(tb.begin(), tb.end());
    v.positive_before = !tb.empty();
    for (double t : tb) {
      const auto scan = sign_scan(f, t, w.xn_grid, opt);
      double alpha = 0.0;
      for (const auto& s : scan.samples) {
        if (s.sign <= 0) break;
        alpha = s.xn;
      }
      v.alpha_samples.emplace_back(t, alpha);
      v.positive_before = v.positive_before && alpha > 0.0;
    }
    v.alpha_nonincreasing = true;
    for (std::size_t k = 1; k < v.alpha_samples.size(); ++k)
      v.alpha_nonincreasing = v.alpha_nonincreasing && v.alpha_samples[k].second <= v.alpha_samples[k - 1].second;

    // (ii), (iii): reversed layer after t = 1, positive above it up to delta.
    std::vector<double> ta = w.t_after;
    std::sort(ta.begin(), ta.end());
    v.reversed_after = !ta.empty();
    for (double t : ta) {
      const auto scan = sign_scan(f, t, w.xn_grid, opt);
      BetaPoint p;
      p.t = t;
      const auto iv = wall_interval(scan);
      bool ok = iv.has_value();
      if (ok) {
        for (const auto& s : scan.samples)
          if (s.xn > iv->y2 && s.xn < delta && s.sign < 0) ok = false;
        const auto z = locate_zero(f, t, iv->y1, iv->y2, opt);
        p.beta1 = z.lo;
        p.beta2 = z.hi;
      }
      v.reversed_after = v.reversed_after && ok;
      v.beta_samples.push_back(p);
    }
  } catch (const IndeterminateRegion& e) {
    throw Inconclusive(std::string("separation window indeterminate: ") + e.what());
  } catch (const LostBracket& e) {
    throw Inconclusive(std::string("separation window lost a zero: ") + e.what());
  }

  // beta non-decreasing in t; beta2 shrinking towards t = 1.
  v.beta_monotone = v.reversed_after;
  for (std::size_t k = 1; k < v.beta_samples.size() && v.beta_monotone; ++k) {
    const auto& p = v.beta_samples[k - 1];
    const auto& q = v.beta_samples[k];
    v.beta_monotone = p.beta2 && q.beta2 && *p.beta2 <= *q.beta2 * (1.0 + 1e-3);
  }
  if (v.reversed_after && v.beta_samples.size() >= 2) {
    v.beta2_ratio = *v.beta_samples.front().beta2 / *v.beta_samples.back().beta2;
    v.limit_check = v.beta2_ratio < 0.25;
  }
  v.holds = v.positive_before && v.alpha_nonincreasing && v.reversed_after && v.beta_monotone && v.limit_check;
  return v;
}

ReversalVerdict classify_reversal(const FieldProbe& f, const ZeroRecord& z, const std::vector<double>& t_window,
                                  const ScanOptions& opt, double spread) {
  if (!(spread > 1.0)) throw std::invalid_argument("spread must exceed 1");
  ReversalVerdict v;
  const double lo = z.x_n_star / spread, hi = z.x_n_star * spread;
  std::vector<double> ts = t_window;
  std::sort(ts.begin(), ts.end());
  v.is_reversal = !ts.empty();
  try {
    for (double t : ts) {
      const SignedSample a = signed_sample(f, lo, t, opt);
      const SignedSample b = signed_sample(f, hi, t, opt);
      if (a.sign == 0 || b.sign == 0 || a.sign == b.sign) {
        v.is_reversal = false;
        v.rows.push_back({t, lo, std::nan(""), hi});
        continue;
      }
      const auto h = locate_zero(f, t, lo, hi, opt);
      v.rows.push_back({t, lo, h.x_n_star, hi});
    }
  } catch (const IndeterminateRegion& e) {
    throw Inconclusive(std::string("reversal window indeterminate: ") + e.what());
  } catch (const LostBracket& e) {
    throw Inconclusive(std::string("reversal window lost the zero: ") + e.what());
  }
  return v;
}

}  // namespace hsstokes::reversal

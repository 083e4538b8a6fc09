#include "hsstokes/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "hsstokes/green.hpp"
#include "hsstokes/kernels.hpp"
#include "hsstokes/parallel.hpp"
#include "hsstokes/velocity.hpp"

namespace hsstokes::suites {

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string point_str(const SpacePoint& x, double t) {
  if (x.dim == 2) return fmt("x=(%.6g, %.6g) t=%.6g", x.xp[0], x.xn, t);
  return fmt("x=(%.6g, %.6g, %.6g) t=%.6g", x.xp[0], x.xp[1], x.xn, t);
}

double rel_err(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

// Largest error over indexed samples, with its point, independent of order.
struct Worst {
  double value = 0.0;
  std::string where;
  void take(double v, const std::string& w) {
    if (v > value || where.empty()) {
      value = v;
      where = w;
    }
  }
};

std::string pattern_str(const std::vector<int>& p) {
  std::string s;
  for (int v : p) s += v > 0 ? '+' : '-';
  return s.empty() ? "none" : s;
}

reversal::ScanOptions scan_options(int threads) {
  reversal::ScanOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> g;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  g.back() = hi;
  return g;
}

Verification from_band(const estimates::BandReport& b) {
  Verification v;
  v.name = "band/" + b.name;
  v.passed = b.passed();
  v.metric("samples", b.samples);
  v.metric("min_ratio", b.min_ratio);
  v.metric("max_ratio", b.max_ratio);
  v.metric("spread", b.spread());
  v.metric("spread_limit", b.spread_limit);
  v.metric("sign_agreement", b.sign_agreement ? 1.0 : 0.0);
  v.metric("inside", b.inside ? 1.0 : 0.0);
  const char* kinds[] = {"two_sided", "upper_bound", "sandwich"};
  v.note("kind", kinds[static_cast<int>(b.kind)]);
  v.note("grid", b.grid);
  v.note("worst_point", b.worst_point);
  return v;
}

std::vector<Verification> identity_suite(int n, int points, std::uint64_t seed, int threads, double limit) {
  if (n != 2 && n != 3) throw DomainError("identity suite needs n = 2 or 3");
  struct Sample {
    SpacePoint x;
    double t;
    int ti, tj;
  };
  PointSource src(seed);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) pairs.emplace_back(i, j);
  std::vector<Sample> pts;
  for (int k = 0; k < points; ++k) {
    Sample s;
    if (n == 2) {
      const double x1 = src.uniform(-1.5, 1.5);
      s.x = SpacePoint::planar(x1, src.uniform(0.2, 1.5));
    } else {
      const double x1 = src.uniform(-1.5, 1.5), x2 = src.uniform(-1.5, 1.5);
      s.x = SpacePoint::spatial(x1, x2, src.uniform(0.2, 1.5));
    }
    s.t = src.uniform(0.2, 2.0);
    s.ti = pairs[k % pairs.size()].first;
    s.tj = pairs[k % pairs.size()].second;
    pts.push_back(s);
  }

  const quad::QuadSpec spec;  // production tolerances
  quad::QuadSpec ball_spec;
  ball_spec.rel_tol = 1e-8;
  ball_spec.abs_tol = 1e-12;

  struct Row {
    double trace = 0, sym = 0, normal = 0, tilde = 0;
  };
  std::vector<Row> rows(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t k) {
    const auto& p = pts[k];
    Row r;
    double tr = 0.0;
    for (int i = 1; i <= n; ++i) tr += green::L_ij({i, i, p.x, p.t}, spec).value;
    std::array<double, 3> buf;
    r.trace = rel_err(tr, 0.5 * kernels::heat_kernel_dn(p.x.as_span(buf), p.t));
    if (n == 3) r.sym = rel_err(green::L_ij({1, 2, p.x, p.t}, spec).value, green::L_ij({2, 1, p.x, p.t}, spec).value);
    for (int i = 1; i < n; ++i) {
      const double lhs = green::L_ij({i, n, p.x, p.t}, spec).value;
      const double rhs = green::L_ij({n, i, p.x, p.t}, spec).value + green::B_in(i, p.x, p.t, spec).value;
      r.normal = std::max(r.normal, rel_err(lhs, rhs));
    }
    const green::TensorQuery q{p.ti, p.tj, p.x, p.t};
    r.tilde = rel_err(green::L_tilde_ij(q, spec).value, green::L_tilde_ball(q, 0.0, ball_spec).value);
    rows[k] = r;
  });

  auto make = [&](const std::string& name, double Row::*field) {
    Verification v;
    v.name = "identity/n" + std::to_string(n) + "/" + name;
    Worst w;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::string where = point_str(pts[k].x, pts[k].t);
      if (field == &Row::tilde) where += fmt(" ij=%g%g", pts[k].ti, pts[k].tj);
      w.take(rows[k].*field, where);
    }
    v.passed = w.value <= limit;
    v.metric("samples", static_cast<double>(rows.size()));
    v.metric("max_rel_err", w.value);
    v.metric("limit", limit);
    v.note("worst_point", w.where);
    return v;
  };
  std::vector<Verification> out;
  out.push_back(make("trace", &Row::trace));
  if (n == 3) out.push_back(make("symmetry", &Row::sym));
  out.push_back(make("normal_tangential", &Row::normal));
  out.push_back(make("tilde_identity", &Row::tilde));
  return out;
}

Verification assembly_check(int component, int points, std::uint64_t seed, int threads) {
  PointSource src(seed + static_cast<std::uint64_t>(component));
  std::vector<velocity::VelocityQuery> qs;
  const BoundaryProfile prof(2, -0.5);
  while (static_cast<int>(qs.size()) < points) {
    const double x1 = src.uniform(-3.0, 3.0), xn = src.uniform(0.2, 2.0), t = src.uniform(0.3, 2.0);
    if (std::abs(t - 1.0) < 0.1) continue;  // w is unbounded at t = 1 for a = -1/2
    qs.push_back({component, SpacePoint::planar(x1, xn), t, prof, {}});
  }
  std::vector<std::array<double, 4>> res(qs.size());
  parallel_for(qs.size(), threads, [&](std::size_t k) {
    const auto a = velocity::w_component(qs[k]);
    velocity::VelocityQuery o = qs[k];
    o.quad.rel_tol = 1e-4;
    o.quad.abs_tol = 1e-7;
    const auto b = velocity::w_direct_oracle(component, o);
    res[k] = {a.value, a.error_estimate, b.value, b.error_estimate};
  });
  Verification v;
  v.name = "assembly/w" + std::to_string(component);
  Worst w;
  double max_diff = 0.0;
  for (std::size_t k = 0; k < res.size(); ++k) {
    const auto& r = res[k];
    const double diff = std::abs(r[0] - r[2]);
    const double comb = r[1] + r[3];
    max_diff = std::max(max_diff, diff);
    w.take(comb > 0.0 ? diff / comb : (diff > 0.0 ? INFINITY : 0.0), point_str(qs[k].x, qs[k].t));
  }
  v.passed = w.value <= 3.0;
  v.metric("samples", static_cast<double>(res.size()));
  v.metric("max_diff_over_error", w.value);
  v.metric("limit", 3.0);
  v.metric("max_abs_diff", max_diff);
  v.note("worst_point", w.where);
  v.note("oracle_tolerance", "rel 1e-4, abs 1e-7");
  return v;
}

Verification divergence_check(int points, std::uint64_t seed, int threads, double limit) {
  PointSource src(seed);
  const BoundaryProfile prof(2, -0.5);
  struct P {
    double x1, xn, t;
  };
  std::vector<P> pts;
  for (int k = 0; k < points; ++k) pts.push_back({src.uniform(-2.0, 2.0), src.uniform(0.5, 2.0), src.uniform(1.5, 3.0)});
  quad::QuadSpec spec;
  spec.rel_tol = 1e-11;
  spec.abs_tol = 1e-14;
  const double h = 1e-3;
  std::vector<std::array<double, 2>> res(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t k) {
    const auto& p = pts[k];
    auto w = [&](int c, double x1, double xn) {
      return velocity::w_component({c, SpacePoint::planar(x1, xn), p.t, prof, spec}).value;
    };
    double g[2][2];
    for (int c = 1; c <= 2; ++c) {
      g[c - 1][0] = (w(c, p.x1 + h, p.xn) - w(c, p.x1 - h, p.xn)) / (2.0 * h);
      g[c - 1][1] = (w(c, p.x1, p.xn + h) - w(c, p.x1, p.xn - h)) / (2.0 * h);
    }
    const double div = g[0][0] + g[1][1];
    const double norm = std::sqrt(g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1]);
    res[k] = {std::abs(div), norm};
  });
  Verification v;
  v.name = "divergence";
  Worst w;
  for (std::size_t k = 0; k < res.size(); ++k)
    w.take(res[k][1] > 0.0 ? res[k][0] / res[k][1] : 0.0, fmt("x=(%.6g, %.6g) t=%.6g", pts[k].x1, pts[k].xn, pts[k].t));
  v.passed = w.value <= limit;
  v.metric("samples", static_cast<double>(res.size()));
  v.metric("max_div_over_grad", w.value);
  v.metric("limit", limit);
  v.metric("step", h);
  v.note("worst_point", w.where);
  return v;
}

std::optional<reversal::ZeroRecord> wall_zero(const reversal::FieldProbe& f, double t, const std::vector<double>& grid,
                                              const reversal::ScanOptions& opt) {
  const auto scan = reversal::sign_scan(f, t, grid, opt);
  if (scan.intervals.empty()) return std::nullopt;
  const auto& iv = scan.intervals.front();
  if (iv.kind != reversal::IntervalKind::minus_plus || iv.lo != scan.samples.front().xn) return std::nullopt;
  return reversal::locate_zero(f, t, iv.y1, iv.y2, opt);
}

Verification reversal_counts(int threads) {
  const auto opt = scan_options(threads);
  const BoundaryProfile prof(2, -0.5);
  const double t = 1.05;
  const auto grid = logspace(1e-3, 100.0, 32);
  const std::vector<double> window{1.02, 1.04, 1.06, 1.08, 1.10};
  Verification v;
  v.name = "reversal_counts";
  bool all_reversal = true;
  std::vector<int> patterns[2];
  for (int comp : {2, 1}) {
    const auto f = reversal::velocity_probe(comp, {12.0}, prof);
    const auto scan = reversal::sign_scan(f, t, grid, opt);
    const std::string tag = comp == 2 ? "wn" : "w1";
    patterns[comp - 1] = scan.pattern();
    v.note(tag + "_pattern", pattern_str(scan.pattern()));
    v.metric(tag + "_sign_changes", static_cast<double>(scan.intervals.size()));
    int k = 0;
    for (const auto& iv : scan.intervals) {
      const auto z = reversal::locate_zero(f, t, iv.y1, iv.y2, opt);
      const auto r = reversal::classify_reversal(f, z, window, opt);
      const std::string key = tag + "_zero" + std::to_string(++k);
      v.metric(key, z.x_n_star);
      v.metric(key + "_reversal", r.is_reversal ? 1.0 : 0.0);
      all_reversal = all_reversal && r.is_reversal;
    }
  }
  const bool wn_ok = patterns[1] == std::vector<int>{1, -1, 1};
  const bool w1_ok = patterns[0].size() == 2;
  v.passed = wn_ok && w1_ok && all_reversal;
  v.note("expected", "wn +-+ (two zeros), w1 one change, every zero a reversal point");
  return v;
}

Verification separation(double a, bool expect_holds, int threads) {
  const auto opt = scan_options(threads);
  const BoundaryProfile prof(2, a);
  const auto f = reversal::velocity_probe(1, {20.0}, prof);
  reversal::SeparationWindows w;
  w.t_before = {0.9, 0.99, 0.999};
  for (double s : logspace(1e-5, 1e-2, 7)) w.t_after.push_back(1.0 + s);
  w.xn_grid = logspace(1e-3, 40.0, 24);
  Verification v;
  v.name = fmt("separation/a=%g", a);
  try {
    const auto s = reversal::classify_separation(f, w, opt);
    v.metric("holds", s.holds);
    v.metric("positive_before", s.positive_before);
    v.metric("alpha_nonincreasing", s.alpha_nonincreasing);
    v.metric("reversed_after", s.reversed_after);
    v.metric("beta_monotone", s.beta_monotone);
    v.metric("limit_check", s.limit_check);
    v.metric("beta2_ratio", s.beta2_ratio);
    for (const auto& b : s.beta_samples)
      if (b.beta2) v.metric(fmt("beta2(t-1=%.3g)", b.t - 1.0), *b.beta2);
    v.passed = expect_holds ? s.holds : (s.reversed_after && !s.limit_check);
  } catch (const reversal::Inconclusive& e) {
    v.passed = false;
    v.note("inconclusive", e.what());
  }
  v.note("expected", expect_holds ? "separation holds, beta2 final/initial < 1/4" : "reversed layer with a positive limit");
  return v;
}

Verification pre_critical(int threads) {
  const auto opt = scan_options(threads);
  const double t = 0.95;
  const auto grid = logspace(1e-3, 50.0, 28);
  const std::vector<double> radii{8.0, 16.0, 32.0};
  Verification v;
  v.name = "pre_critical";
  bool positive = true;
  {
    const BoundaryProfile prof(2, -0.5);
    for (double r : radii) {
      const auto scan = reversal::sign_scan(reversal::velocity_probe(1, {r}, prof), t, grid, opt);
      const bool pos = scan.pattern() == std::vector<int>{1};
      v.note(fmt("a=-0.5 |x'|=%g pattern", r), pattern_str(scan.pattern()));
      positive = positive && pos;
    }
  }
  bool single = true;
  double lo = INFINITY, hi = 0.0;
  int members = 0;
  {
    const BoundaryProfile prof(2, 0.5);
    for (double r : radii) {
      const auto f = reversal::velocity_probe(1, {r}, prof);
      const auto scan = reversal::sign_scan(f, t, grid, opt);
      v.note(fmt("a=0.5 |x'|=%g pattern", r), pattern_str(scan.pattern()));
      // Only a plus_minus change passes; a single change of the other kind is
      // still located and recorded.
      single = single && scan.intervals.size() == 1 && scan.intervals[0].kind == reversal::IntervalKind::plus_minus;
      if (scan.intervals.size() != 1) continue;
      const auto z = reversal::locate_zero(f, t, scan.intervals[0].y1, scan.intervals[0].y2, opt);
      const double ratio = z.x_n_star / std::sqrt(std::log(r));
      v.metric(fmt("a=0.5 |x'|=%g zero", r), z.x_n_star);
      v.metric(fmt("a=0.5 |x'|=%g ratio", r), ratio);
      const auto labels = scaling::region_classify({0.5, r, t, 2, prof.mass()});
      const bool in_c1 = std::any_of(labels.begin(), labels.end(), [](const scaling::RegionLabel& l) {
        return l.family == scaling::Family::C && l.index == 1;
      });
      v.metric(fmt("a=0.5 |x'|=%g in C1", r), in_c1);
      if (in_c1) {
        ++members;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
  }
  const double spread = members > 0 ? hi / lo : 1.0;
  v.metric("c1_members", members);
  v.metric("c1_ratio_spread", spread);
  if (members == 0) v.note("c1_band", "no radius lies in C_a^1 with unit constants; the band check is vacuous");
  v.passed = positive && single && spread < 1e3;
  return v;
}

std::vector<Verification> exponent_fits(int threads) {
  const auto opt = scan_options(threads);
  const double a = -0.75;
  const BoundaryProfile prof(2, a);
  const auto grid = logspace(1e-3, 40.0, 24);
  const double target_t = (a + 0.5) / (2.0 * a - 1.0), target_r = 2.0 / (1.0 - 2.0 * a);
  std::vector<Verification> out;

  {
    Verification v;
    v.name = "fit/t_minus_1";
    const double r = 20.0;
    const auto f = reversal::velocity_probe(1, {r}, prof);
    std::vector<std::pair<double, double>> samples;
    double plo = INFINITY, phi = 0.0;
    for (double s : logspace(1e-6, 1e-2, 9)) {
      const auto z = wall_zero(f, 1.0 + s, grid, opt);
      if (!z) {
        v.note(fmt("t-1=%.3g", s), "no wall zero");
        continue;
      }
      samples.emplace_back(s, z->x_n_star);
      v.metric(fmt("zero(t-1=%.3g)", s), z->x_n_star);
      const scaling::RegionParams rp{a, r, 1.0 + s, 2, prof.mass()};
      auto labels = scaling::region_classify(rp);
      labels.erase(std::remove_if(labels.begin(), labels.end(),
                                  [](const scaling::RegionLabel& l) { return l.family != scaling::Family::A; }),
                   labels.end());
      if (labels.size() == 1) {
        try {
          const double p = scaling::predicted_zero(rp, scaling::ZeroKind::tangential, labels[0]);
          plo = std::min(plo, p / z->x_n_star);
          phi = std::max(phi, p / z->x_n_star);
          v.note(fmt("region(t-1=%.3g)", s), labels[0].name());
        } catch (const scaling::NoBranch&) {
        }
      }
    }
    v.metric("target", target_t);
    v.metric("tolerance", 0.03);
    try {
      const auto fit = scaling::fit_exponent(samples, scaling::Sweep::t_minus_1);
      v.metric("exponent", fit.exponent);
      v.metric("r_squared", fit.r_squared);
      v.passed = std::abs(fit.exponent - target_t) <= 0.03;
    } catch (const scaling::InsufficientSpan& e) {
      v.note("fit", e.what());
    }
    if (phi > 0.0) v.metric("predicted_over_measured_spread", phi / plo);
    out.push_back(v);
  }

  {
    Verification v;
    v.name = "fit/x_prime_norm";
    const double t = 1.0 + 1e-4;
    std::vector<std::pair<double, double>> all, members;
    for (double r : logspace(8.0, 64.0, 7)) {
      const auto z = wall_zero(reversal::velocity_probe(1, {r}, prof), t, grid, opt);
      const auto labels = scaling::region_classify({a, r, t, 2, prof.mass()});
      const bool in_a1 = std::any_of(labels.begin(), labels.end(), [](const scaling::RegionLabel& l) {
        return l.family == scaling::Family::A && l.index == 1;
      });
      v.metric(fmt("in_A1(|x'|=%.4g)", r), in_a1);
      if (!z) {
        v.note(fmt("|x'|=%.4g", r), "no wall zero");
        continue;
      }
      v.metric(fmt("zero(|x'|=%.4g)", r), z->x_n_star);
      all.emplace_back(r, z->x_n_star);
      if (in_a1) members.emplace_back(r, z->x_n_star);
    }
    v.metric("target", target_r);
    v.metric("tolerance", 0.1);
    v.metric("members", static_cast<double>(members.size()));
    // The requested range [8, 64] is 0.9 decades; that is the span required.
    const double decades = std::log10(64.0 / 8.0);
    try {
      const auto fit = scaling::fit_exponent(all, scaling::Sweep::x_prime_norm, {}, decades);
      v.metric("unrestricted_exponent", fit.exponent);
    } catch (const scaling::InsufficientSpan& e) {
      v.note("unrestricted_fit", e.what());
    }
    try {
      const auto fit = scaling::fit_exponent(members, scaling::Sweep::x_prime_norm, {}, decades);
      v.metric("exponent", fit.exponent);
      v.metric("r_squared", fit.r_squared);
      v.passed = std::abs(fit.exponent - target_r) <= 0.1;
    } catch (const scaling::InsufficientSpan& e) {
      v.note("fit", std::string("restricted to A_a^1: ") + e.what());
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace hsstokes::suites

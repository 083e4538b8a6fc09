#include "hsstokes/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hsstokes::scaling {

namespace {

// Sum of indicator-weighted terms where an off indicator must not let a
// NaN or infinity from its term leak through.
double pick(std::initializer_list<std::pair<bool, double>> terms) {
  double s = 0.0;
  for (const auto& [on, v] : terms)
    if (on) s += v;
  return s;
}

// alpha <= v <= beta with unit constants.
bool between(double alpha, double v, double beta) { return alpha <= v && v <= beta; }

// S(alpha, beta) on e^{-|x'|^2}; the printed S(0, beta) has no lower bound,
// every other use needs alpha > 0.
bool S(double alpha, double beta, double r2, bool open_below = false) {
  const double e = std::exp(-r2);
  if (!open_below && !(alpha > 0.0)) return false;
  return between(open_below ? 0.0 : alpha, e, beta);
}

bool S_point(double alpha, double r2) {
  if (!(alpha > 0.0)) return false;
  return between(alpha / kPointBand, std::exp(-r2), alpha * kPointBand);
}

// V_k(alpha, beta) on |x'|^k e^{-|x'|^2} / ln(|x'|^{-k} e^{|x'|^2}).
double v_measure(int k, double r) {
  const double r2 = r * r;
  const double lg = r2 - k * std::log(r);
  return std::exp(k * std::log(r) - r2) / lg;
}

bool V(int k, double alpha, double beta, double r) {
  if (!(alpha > 0.0)) return false;
  return between(alpha, v_measure(k, r), beta);
}

RegionLabel label(Family f, int i, std::map<std::string, double> c = {}) {
  RegionLabel l;
  l.family = f;
  l.index = i;
  l.constants_used = std::move(c);
  l.constants_used.emplace("c", 1.0);
  return l;
}

}  // namespace

char family_letter(Family f) { return "ABCD"[static_cast<int>(f)]; }

std::string RegionLabel::name() const { return std::string(1, family_letter(family)) + std::to_string(index); }

double f_a(double a, double t) {
  const double s = t - 1.0;
  const double h = std::abs(a + 0.5);
  const bool short_t = s <= 0.25 * std::exp(-1.0 / h);
  const double bracket = short_t ? std::pow(s, -h) / h : std::abs(std::log(s));
  return pick({{-1.0 < a && a <= -0.75, std::pow(s, a + 0.5) / (a + 1.0)},
               {a == -0.5, std::abs(std::log(s))},
               {-0.75 < a && a < -0.5, bracket},
               {-0.5 < a && a <= -0.25, bracket * std::pow(s, h)},
               {a > -0.25, 1.0}});
}

double f_ia(int i, double a, double t) {
  const double s = t - 1.0;
  const double ls = std::abs(std::log(s));
  switch (i) {
    case 1:
      return pick({{-1.0 < a && a < 0.0, std::pow(s, a) / (a + 1.0)},
                   {0.0 < a && a <= 0.25, std::pow(s, a)},
                   {0.25 < a && a < 0.5,
                    s > std::exp(2.0 / (2.0 * a - 1.0)) ? std::sqrt(s) * ls : std::pow(s, a) / (1.0 - 2.0 * a)},
                   {a == 0.5, std::sqrt(s) * ls},
                   {0.5 < a && a <= 0.75,
                    s > std::exp(2.0 / (1.0 - 2.0 * a)) ? std::pow(s, a - 0.5) * ls : std::sqrt(s) / (2.0 * a - 1.0)},
                   {a > 0.75, std::sqrt(s)}});
    case 2:
      return pick({{0.0 < a && a <= 0.25, std::pow(s, a)},
                   {0.25 < a && a < 0.5, std::pow(s, a) / (1.0 - 2.0 * a)},
                   {0.5 < a && a <= 0.75, std::sqrt(s) / (2.0 * a - 1.0)},
                   {a > 0.75, std::sqrt(s)}});
    case 3:
      return pick({{(0.0 < a && a <= 0.25) || a > 0.75, 1.0},
                   {0.25 < a && a < 0.5, std::exp(2.0 * a / (2.0 * a - 1.0)) / (1.0 - 2.0 * a)},
                   {0.5 < a && a <= 0.75, 1.0 / (2.0 * a - 1.0)}});
    case 4:
      // The last branch is printed with (1 - t)^a although t > 1; kept as
      // printed, it is NaN for non-integer a and the set is empty.
      return pick({{0.25 < a && a < 0.5, std::max(std::exp(1.0 / (2.0 * a - 1.0)) / std::sqrt(2.0), std::sqrt(2.0 * s))},
                   {a == 0.5, std::sqrt(s)},
                   {0.5 < a && a < 0.75,
                    std::max(std::pow(2.0, -a) * std::exp(2.0 * a / (1.0 - 2.0 * a)), std::pow(2.0, a) * std::pow(-s, a))}});
    default:
      throw std::invalid_argument("f_ia index must be 1..4");
  }
}

double sigma(double a, double t) {
  const double u = 1.0 - t;
  if (a == 0.5) return std::abs(std::log(2.0 * std::exp(2.0) * u));
  const double m = std::max(2.0, std::exp(1.0 / a));
  return (std::pow(2.0, 0.5 - a) - std::pow(m * u, a - 0.5)) / (a - 0.5);
}

double mu(double a, double t, double mass) {
  return mass + (std::exp(1.0 / a) < 1.0 / (2.0 * (1.0 - t)) ? sigma(a, t) : 0.0);
}

double g_ia(int i, double a, double t, double mass) {
  const double u = 1.0 - t;
  const double ea = std::exp(1.0 / a);
  const double m = mu(a, t, mass);
  const bool big = ea > 10.0 / 3.0;
  const double lg = std::log(2.0 * a * std::pow(u, a - 0.5) / m);
  switch (i) {
    case 1:
      return pick({{big, (m + a * std::pow(u, a - 0.5)) * std::min(std::exp(-1.0), std::sqrt(2.5 * u))},
                   {2.0 < ea && ea < 10.0 / 3.0, (m + a * std::pow(u, a - 0.5)) * std::min(std::exp(-1.0), std::sqrt(2.0 * u))},
                   {ea <= 2.0, mass + a * std::pow(u, a - 0.5) + std::pow(2.0, 0.5 - a) / (a - 0.5)}});
    case 2:
      return pick({{big, a * std::pow(u, a)}});
    case 3:
      return pick({{big, a * std::pow(u, a) *
                             std::min(lg, std::abs(std::log(std::min(std::exp(-2.0), 0.75 * ea * u) / u)))}});
    case 4:
      return pick({{big, m * std::sqrt(u) + a * std::pow(u, a) * lg}});
    case 5:
      return pick({{big, m * std::min(std::exp(-1.0), std::sqrt(0.75 * ea * u)) + a * std::pow(u, a) * lg}});
    case 6:
      return pick({{2.0 < ea && ea < 1.0 / (2.0 * u), std::exp(0.5 / a) * std::sqrt(u) * (1.0 + sigma(a, t))}});
    case 7:
      return pick({{0.0 < a && a < 0.5, std::pow(u, a) / (0.5 - a)},
                   {2.0 < ea && ea < std::exp(2.0), std::exp(0.5 / a) / (a - 0.5) * std::sqrt(u)}});
    case 8:
      return pick({{0.0 < a && a < 0.5, std::exp(2.0 * a / (2.0 * a - 1.0)) / (0.5 - a)},
                   {2.0 < ea && ea < std::exp(2.0), std::exp(1.0 / (1.0 - 2.0 * a)) / (a - 0.5)}});
    case 9:
      return pick({{std::exp(2.0) < ea && ea < 1.0 / (2.0 * u),
                    std::max(std::exp(0.5 / a) * std::sqrt(u), std::exp(1.0 / (2.0 * a - 1.0)))},
                   {a == 0.5, std::exp(1.0) * std::sqrt(u)},
                   {2.0 < ea && ea < std::exp(2.0),
                    std::max(std::exp(1.0) * std::pow(u, a), std::pow(2.0, -a) * std::exp(2.0 * a / (1.0 - 2.0 * a)))}});
    default:
      throw std::invalid_argument("g_ia index must be 1..9");
  }
}

std::vector<RegionLabel> region_classify(const RegionParams& p) {
  std::vector<RegionLabel> out;
  const double a = p.a, t = p.t, r = p.x_prime_norm, r2 = r * r;
  if (!(a > -1.0) || !(r > 0.0) || !(t > 0.0) || t == 1.0) return out;

  if (t > 1.0) {
    const double s = t - 1.0;
    const double h = a + 0.5;
    // U1, U2, U3 with unit constants.
    auto U1 = [&](double lo, double hi) { return between(lo, std::abs(a + 1.0) * r2, hi); };
    auto U2 = [&](double lo, double hi) { return between(lo, std::abs(h) * r2, hi); };
    auto U3 = [&](double lo, double hi) { return between(lo, r2 / std::log(r2 / s), hi); };
    bool a1 = false, a2 = false;
    if (a <= -0.75) a1 = U1(s, std::pow(s, h));
    else if (a < -0.5) a1 = U2(std::exp(-2.0 / (1.0 + 2.0 * a)) * s, std::pow(s, h));
    else if (a > -0.5 && a <= -0.25) a1 = U2(std::exp(2.0 / (1.0 + 2.0 * a)) * s, 1.0);
    if (-0.75 < a && a < -0.5) a2 = U3(s, std::min(std::exp(-2.0 / (1.0 + 2.0 * a)) * s, 0.25));
    else if (a == -0.5) a2 = U3(s, 1.0);
    else if (-0.5 < a && a <= -0.25)
      a2 = U3(s, std::min(std::exp((1.0 - 2.0 * a) / (1.0 + 2.0 * a)) * s, std::pow(2.0, 2.0 * a - 1.0) * std::pow(s, h)));
    const double fa = f_a(a, t);
    const bool a3 = fa > 0.0 && between(1.0, r2 / fa, std::exp(r2));
    if (a1) out.push_back(label(Family::A, 1));
    if (a2) out.push_back(label(Family::A, 2));
    if (a3) out.push_back(label(Family::A, 3));

    const int k = p.n - 2;
    if (S(0.0, f_ia(1, a, t), r2, true) && f_ia(1, a, t) > 0.0) out.push_back(label(Family::B, 1));
    if (S(f_ia(2, a, t), f_ia(3, a, t), r2)) out.push_back(label(Family::B, 2));
    if (r > 1.0 && V(k, f_ia(4, a, t), 1.0, r)) out.push_back(label(Family::B, 3));
    return out;
  }

  const double u = 1.0 - t;
  if (a > 0.0 && r > 1.0) {
    const std::map<std::string, double> c{{"theta0", kTheta0}, {"theta1", theta1(a)}};
    if (std::pow(u, a) <= std::pow(std::log(r), -0.5) * std::pow(r, -kTheta0)) out.push_back(label(Family::C, 1, c));
    if (std::abs(std::log(u)) <= r2 * std::pow(u, theta1(a))) out.push_back(label(Family::C, 2, c));
  }
  if (a > 0.0) {
    auto g = [&](int i) { return g_ia(i, a, t, p.mass); };
    const std::map<std::string, double> c{{"M", p.mass}};
    if (g(1) > 0.0 && S(0.0, g(1), r2, true)) out.push_back(label(Family::D, 1, c));
    if (S(g(2), g(3), r2)) out.push_back(label(Family::D, 2, c));
    if (S(g(4), g(5), r2)) out.push_back(label(Family::D, 3, c));
    if (S_point(g(6), r2)) out.push_back(label(Family::D, 4, c));
    if (S(g(7), g(8), r2)) out.push_back(label(Family::D, 5, c));
    if (r > 1.0 && V(p.n, g(9), 1.0, r)) out.push_back(label(Family::D, 6, c));
  }
  return out;
}

namespace {

double checked(double v, const char* where) {
  if (!(v > 0.0) || !std::isfinite(v)) throw NoBranch(std::string(where) + ": formula is not a positive finite value");
  return v;
}

[[noreturn]] void no_branch(const std::string& what) { throw NoBranch(what); }

int require_index(const std::optional<RegionLabel>& region, Family f) {
  if (!region) no_branch("a region label is required here");
  if (region->family != f) no_branch(std::string("expected a region of family ") + family_letter(f));
  return region->index;
}

double tangential_after(double a, double r, double t, const std::optional<RegionLabel>& region) {
  const double r2 = r * r;
  if (t >= 9.0 / 8.0) return std::sqrt(t * std::log((a + 1.0) * r2 / t));
  const double s = t - 1.0;
  const double h = a + 0.5;
  const double ls = std::abs(std::log(s));
  const int i = require_index(region, Family::A);
  if (-1.0 < a && a < -0.75) {
    if (i == 1) return std::pow((a + 1.0) * r2 / std::pow(s, h), 1.0 / (1.0 - 2.0 * a));
    if (i == 3) return std::sqrt(std::log((a + 1.0) * r2 / std::pow(s, h)));
  } else if (-0.75 <= a && a < -0.5) {
    if (i == 1) return std::pow(std::abs(h) * r2 / std::pow(s, h), 1.0 / (1.0 - 2.0 * a));
    if (i == 2) return r / std::sqrt(std::log(r2 / s));
    if (i == 3) {
      if (t >= 1.0 + 0.25 * std::exp(1.0 / h)) return std::sqrt(std::log(r2 / ls));
      return std::sqrt(std::log(std::abs(h) * r2 / std::pow(s, h)));
    }
  } else if (a == -0.5) {
    if (i == 2) return r / std::sqrt(std::log(r2 / s));
    if (i == 3) return std::sqrt(std::log(r2 / ls));
  } else if (-0.5 < a && a < -0.25) {
    if (i == 1) return std::sqrt(h) * r;
    if (i == 2) return std::pow(r2 / (std::pow(s, h) * std::log(r2 / s)), 1.0 / (1.0 - 2.0 * a));
    if (i == 3) {
      if (t > 1.0 + std::exp(-1.0 / h)) return std::sqrt(std::log(r2 / (std::pow(s, h) * ls)));
      return std::sqrt(std::log(h * r2));
    }
  } else if (-0.25 <= a && a < 1.0) {
    if (i == 3) return std::sqrt(std::log(r));
  }
  no_branch("no tangential branch for a = " + std::to_string(a) + " in A" + std::to_string(i));
}

double normal_after(double a, double r, double t, int n, const std::optional<RegionLabel>& region) {
  const double r2 = r * r;
  const double e = std::exp(-r2);
  if (t > 9.0 / 8.0) return std::pow(r, n) * std::pow(t, -0.5 * (n - 1)) * std::exp(-r2 / t);
  const double s = t - 1.0;
  const double ls = std::abs(std::log(s));
  const int i = require_index(region, Family::B);
  if (-1.0 < a && a < 0.0) {
    if (i == 1) return ((a + 1.0) * e + std::pow(s, a) * std::exp(-r2 / s)) * std::pow(s, 0.5 - a);
  } else if (0.0 < a && a < 0.25) {
    if (i == 1) return std::pow(s, 0.5 - a) * e;
    if (i == 2) return std::exp(-r2 / (2.0 * a));
  } else if (0.25 <= a && a < 0.5) {
    if (i == 1) {
      if (t > 1.0 + std::exp(1.0 / (a - 0.5))) return e / ls;
      return (0.5 - a) * std::pow(s, 0.5 - a) * e;
    }
    if (i == 2) return std::pow((1.0 - 2.0 * a) * e, 1.0 / (2.0 * a));
    if (i == 3) return e;
  } else if (a == 0.5) {
    if (i == 1) return e / ls;
    if (i == 3) return e;
  } else if (0.5 < a && a < 0.75) {
    if (i == 1) {
      if (t > 1.0 + std::exp(2.0 / (2.0 * a - 1.0))) return std::pow(s, 0.5 - a) / ls * e;
      return (a - 0.5) * e;
    }
    if (i == 2) return (2.0 * a - 1.0) * e;
    if (i == 3) return std::exp(-r2 / (2.0 * a));
  } else if (0.75 <= a && a <= 1.0) {
    if (i == 1 || i == 2) return e;
  }
  no_branch("no normal branch for a = " + std::to_string(a) + " in B" + std::to_string(i));
}

double tangential_before(double a, double r, double t, const std::optional<RegionLabel>& region) {
  if (a < 0.0) no_branch("tangential component keeps its sign for a < 0 before t = 1");
  if (a == 0.0) no_branch("a = 0 is not covered");
  const int i = require_index(region, Family::C);
  if (i == 1) return std::sqrt(std::log(r));
  if (i == 2) return std::sqrt(std::abs(std::log(1.0 - t)));
  no_branch("no tangential branch in C" + std::to_string(i));
}

double normal_before(double a, double r, double t, int n, double mass, const std::optional<RegionLabel>& region) {
  if (a < 0.0) no_branch("normal component keeps its sign for a < 0 before t = 1");
  if (a == 0.0) no_branch("a = 0 is not covered");
  if (!(t > 7.0 / 8.0)) no_branch("normal branches need 7/8 < t < 1");
  const double r2 = r * r;
  const double e = std::exp(-r2);
  const double u = 1.0 - t;
  const double M = mass;
  const double sg = sigma(a, t);
  const int i = require_index(region, Family::D);
  const double lgv = r2 - n * std::log(r);  // ln(|x'|^{-n} e^{|x'|^2})
  if (a < 1.0 / std::log(10.0 / 3.0)) {
    if (t < 1.0 - 0.5 * std::exp(-1.0 / a)) {
      if (i == 1) return e / (M + a * std::pow(u, a - 0.5));
      if (i == 2) return std::sqrt(u) * std::exp(e / (2.0 * a * std::pow(u, a)));
      if (i == 3) return (e + a * std::pow(u, a) * std::log(M / (2.0 * a * std::pow(u, a - 0.5)))) / M;
    } else {
      if (i == 1) return e / (M + a * std::pow(u, a - 0.5) + sg);
      if (i == 2) return std::sqrt(u) * std::exp(e / (2.0 * a * std::pow(u, a)));
      if (i == 3) return (e + a * std::pow(u, a) * std::log((M + sg) / (2.0 * a * std::pow(u, a - 0.5)))) / (M + sg);
      if (i == 4) return e / (M + sg);
      if (i == 5) {
        if (a < 0.5) return std::pow((0.5 - a) * e, 1.0 / (2.0 * a));
        if (a > 0.5) return (a - 0.5) * e;
      }
      if (i == 6) return a <= 0.5 ? e / lgv : std::pow(e / lgv, 1.0 / (2.0 * a));
    }
  } else if (a < 1.0 / std::log(2.0)) {
    if (i == 1) return e / (M + std::pow(u, a - 0.5) + sg);
    if (i == 4) return e / (M + sg);
    if (i == 5) return (a - 0.5) * e;
    if (i == 6) return std::pow(e / lgv, 1.0 / (2.0 * a));
  } else {
    if (i == 1) return e / (M + a * std::pow(u, a - 0.5) + std::pow(2.0, 0.5 - a) / (a - 0.5));
  }
  no_branch("no normal branch for a = " + std::to_string(a) + " in D" + std::to_string(i));
}

}  // namespace

double predicted_zero(const RegionParams& p, ZeroKind kind, const std::optional<RegionLabel>& region) {
  const double a = p.a, r = p.x_prime_norm, t = p.t;
  if (!(a > -1.0) || !(r > 0.0) || !(t > 0.0) || !std::isfinite(a + r + t)) no_branch("parameters outside every case");
  if (t == 1.0) no_branch("t = 1 is the blow-up time itself");
  switch (kind) {
    case ZeroKind::tangential:
      return checked(t > 1.0 ? tangential_after(a, r, t, region) : tangential_before(a, r, t, region), "tangential");
    case ZeroKind::normal:
      return checked(t > 1.0 ? normal_after(a, r, t, p.n, region) : normal_before(a, r, t, p.n, p.mass, region),
                     "normal");
    case ZeroKind::normal_far:
      if (!(a > 0.0) || !(t > 1.0)) no_branch("the far normal zero needs a > 0 and t > 1");
      return r;
  }
  no_branch("unknown zero kind");
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& samples, Sweep,
                        const std::function<double(double)>& correction, double min_decades) {
  if (samples.size() < 6) throw InsufficientSpan("need at least 6 samples");
  std::vector<double> X, Y;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [s, x] : samples) {
    const double y = correction ? x * correction(s) : x;
    if (!(s > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit samples must be positive");
    X.push_back(std::log(s));
    Y.push_back(std::log(y));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (std::log10(hi / lo) < min_decades * (1.0 - 1e-12))
    throw InsufficientSpan("samples span " + std::to_string(std::log10(hi / lo)) + " decades, need " +
                           std::to_string(min_decades));
  const double N = static_cast<double>(X.size());
  const double mx = std::accumulate(X.begin(), X.end(), 0.0) / N;
  const double my = std::accumulate(Y.begin(), Y.end(), 0.0) / N;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    sxx += (X[k] - mx) * (X[k] - mx);
    sxy += (X[k] - mx) * (Y[k] - my);
    syy += (Y[k] - my) * (Y[k] - my);
  }
  ScalingFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  f.range = {lo, hi};
  return f;
}

}  // namespace hsstokes::scaling

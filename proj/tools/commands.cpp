#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "hsstokes/boundary.hpp"
#include "hsstokes/estimates.hpp"
#include "hsstokes/parallel.hpp"
#include "hsstokes/reversal.hpp"
#include "hsstokes/scaling.hpp"
#include "hsstokes/velocity.hpp"

namespace stokes_cli {

using namespace hsstokes;
using suites::Verification;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(const RunConfig& c, const std::string& command) {
  std::ostringstream s;
  s << "# stokes " << kVersion << " " << command << "\n";
  s << "# config_hash " << c.hash() << "\n";
  s << "# a " << num(c.a) << "\n";
  s << "# n " << c.n << "\n";
  s << "# rel_tol " << num(c.rel_tol) << " abs_tol " << num(c.abs_tol) << "\n";
  s << "# config " << c.canonical().dump() << "\n";
  return s.str();
}

namespace {

std::vector<int> components_or(const RunConfig& c, int last) {
  if (!c.components.empty()) return c.components;
  std::vector<int> all;
  for (int k = 1; k <= last; ++k) all.push_back(k);
  return all;
}

// On the x_1 axis away from the support; at x' = 0 the tangential
// components vanish by symmetry and cannot be signed.
std::vector<std::vector<double>> positions(const RunConfig& c) {
  if (!c.x_prime.empty()) return c.x_prime;
  std::vector<double> p(c.n - 1, 0.0);
  p[0] = 12.0;
  return {p};
}

std::vector<double> or_default(const std::vector<double>& g, std::vector<double> fallback) {
  return g.empty() ? fallback : g;
}

quad::QuadSpec eval_quad(const RunConfig& c) {
  quad::QuadSpec q;
  q.rel_tol = c.rel_tol;
  q.abs_tol = c.abs_tol;
  return q;
}

// Sign decisions use tolerances relative to the integral of |integrand|; an
// absolute floor would make every small value unsignable.
reversal::ScanOptions scan_opts(const RunConfig& c) {
  reversal::ScanOptions o;
  o.quad.rel_tol = c.rel_tol;
  o.threads = c.threads;
  return o;
}

BoundaryProfile profile(const RunConfig& c) { return BoundaryProfile(c.n, c.a, c.amplitude); }

std::string xp_columns(int n) {
  std::string s;
  for (int k = 1; k < n; ++k) s += "x" + std::to_string(k) + ",";
  return s;
}

std::string xp_values(const std::vector<double>& xp) {
  std::string s;
  for (double v : xp) s += num(v) + ",";
  return s;
}

double norm(const std::vector<double>& xp) {
  double s = 0.0;
  for (double v : xp) s += v * v;
  return std::sqrt(s);
}

const char* kind_name(reversal::IntervalKind k) {
  return k == reversal::IntervalKind::minus_plus ? "minus_plus" : "plus_minus";
}

const std::vector<double> kScanGrid = suites::logspace(1e-3, 100.0, 32);

}  // namespace

int cmd_eval(const RunConfig& c, std::ostream& out) {
  struct Task {
    std::vector<double> xp;
    double xn, t;
    int comp;
  };
  std::vector<Task> tasks;
  for (const auto& xp : positions(c))
    for (double xn : or_default(c.xn, {0.5}))
      for (double t : or_default(c.t, {1.05}))
        for (int comp : components_or(c, c.n)) tasks.push_back({xp, xn, t, comp});

  const BoundaryProfile prof = profile(c);
  std::vector<velocity::VelocitySample> res(tasks.size());
  parallel_for(tasks.size(), c.threads, [&](std::size_t i) {
    velocity::VelocityQuery q;
    q.component = tasks[i].comp;
    q.x = SpacePoint::make(tasks[i].xp, tasks[i].xn);
    q.t = tasks[i].t;
    q.profile = prof;
    q.quad = eval_quad(c);
    res[i] = velocity::w_component(q);
  });

  static const char* parts[] = {"Ltilde", "B", "N", "Ltilde_sum", "G"};
  out << csv_header(c, "eval");
  out << xp_columns(c.n) << "xn,t,component,value,error";
  for (const char* p : parts) out << "," << p;
  out << "\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    out << xp_values(tasks[i].xp) << num(tasks[i].xn) << "," << num(tasks[i].t) << "," << tasks[i].comp << ","
        << num(res[i].value) << "," << num(res[i].error_estimate);
    for (const char* p : parts) {
      out << ",";
      if (auto it = res[i].parts.find(p); it != res[i].parts.end()) out << num(it->second.value);
    }
    out << "\n";
  }
  return kOk;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const auto opt = scan_opts(c);
  const BoundaryProfile prof = profile(c);
  const auto grid = or_default(c.xn, kScanGrid);
  out << csv_header(c, "scan");
  out << xp_columns(c.n) << "t,component,pattern,index,kind,y1,y2,lo,hi\n";
  for (const auto& xp : positions(c))
    for (int comp : components_or(c, c.n)) {
      const auto f = reversal::velocity_probe(comp, xp, prof);
      for (double t : or_default(c.t, {1.05})) {
        const auto r = reversal::sign_scan(f, t, grid, opt);
        std::string pat;
        for (int s : r.pattern()) pat += s > 0 ? '+' : '-';
        int k = 0;
        for (const auto& iv : r.intervals)
          out << xp_values(xp) << num(t) << "," << comp << "," << pat << "," << ++k << "," << kind_name(iv.kind)
              << "," << num(iv.y1) << "," << num(iv.y2) << "," << num(iv.lo) << "," << num(iv.hi) << "\n";
        if (r.intervals.empty()) out << xp_values(xp) << num(t) << "," << comp << "," << pat << ",0,none,,,,\n";
      }
    }
  return kOk;
}

int cmd_zeros(const RunConfig& c, std::ostream& out) {
  const auto opt = scan_opts(c);
  const BoundaryProfile prof = profile(c);
  const auto grid = or_default(c.xn, kScanGrid);
  out << csv_header(c, "zeros");
  out << xp_columns(c.n) << "t,component,kind,x_n_star,lo,hi,residual,error\n";
  for (const auto& xp : positions(c))
    for (int comp : components_or(c, c.n)) {
      const auto f = reversal::velocity_probe(comp, xp, prof);
      for (double t : or_default(c.t, {1.05})) {
        const auto r = reversal::sign_scan(f, t, grid, opt);
        for (const auto& iv : r.intervals) {
          const auto z = reversal::locate_zero(f, t, iv.y1, iv.y2, opt);
          out << xp_values(xp) << num(t) << "," << comp << "," << kind_name(iv.kind) << "," << num(z.x_n_star) << ","
              << num(z.lo) << "," << num(z.hi) << "," << num(z.residual) << "," << num(z.error) << "\n";
        }
      }
    }
  return kOk;
}

int cmd_beta(const RunConfig& c, std::ostream& out) {
  const auto opt = scan_opts(c);
  const BoundaryProfile prof = profile(c);
  const auto grid = or_default(c.xn, suites::logspace(1e-3, 40.0, 24));
  std::vector<double> tg = c.t;
  if (tg.empty())
    for (double s : suites::logspace(1e-5, 1e-2, 7)) tg.push_back(1.0 + s);
  out << csv_header(c, "beta");
  out << xp_columns(c.n) << "component,t,beta1,beta2\n";
  for (const auto& xp : positions(c))
    for (int comp : components_or(c, c.n - 1)) {
      const auto f = reversal::velocity_probe(comp, xp, prof);
      for (const auto& b : reversal::beta_curves(f, tg, grid, opt))
        out << xp_values(xp) << comp << "," << num(b.t) << "," << (b.beta1 ? num(*b.beta1) : "") << ","
            << (b.beta2 ? num(*b.beta2) : "") << "\n";
    }
  return kOk;
}

int cmd_regions(const RunConfig& c, std::ostream& out) {
  const BoundaryProfile prof = profile(c);
  std::vector<double> radii;
  for (const auto& xp : c.x_prime) radii.push_back(norm(xp));
  if (radii.empty()) radii = suites::logspace(2.0, 64.0, 6);
  const auto tg = or_default(c.t, {0.9, 0.95, 0.99, 1.0001, 1.01, 1.1});
  out << csv_header(c, "regions");
  out << "x_prime_norm,t,labels,predicted_tangential\n";
  for (double r : radii)
    for (double t : tg) {
      const scaling::RegionParams p{c.a, r, t, c.n, prof.mass()};
      const auto labels = scaling::region_classify(p);
      std::string names, pred;
      for (const auto& l : labels) {
        names += (names.empty() ? "" : ";") + l.name();
        std::string v = "nan";
        try {
          v = num(scaling::predicted_zero(p, scaling::ZeroKind::tangential, l));
        } catch (const scaling::NoBranch&) {
        }
        pred += (pred.empty() ? "" : ";") + v;
      }
      out << num(r) << "," << num(t) << "," << (names.empty() ? "none" : names) << "," << pred << "\n";
    }
  return kOk;
}

namespace {

nlohmann::ordered_json to_json(const Verification& v) {
  nlohmann::ordered_json j;
  j["name"] = v.name;
  j["passed"] = v.passed;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, x] : v.metrics) j["metrics"][k] = std::isfinite(x) ? nlohmann::ordered_json(x) : nullptr;
  j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, x] : v.notes) j["notes"][k] = x;
  return j;
}

nlohmann::ordered_json document(const RunConfig& c, const std::string& command,
                                const std::vector<Verification>& results) {
  nlohmann::ordered_json d;
  d["tool"] = "stokes";
  d["version"] = kVersion;
  d["command"] = command;
  d["config_hash"] = c.hash();
  d["a"] = c.a;
  d["n"] = c.n;
  d["rel_tol"] = c.rel_tol;
  d["abs_tol"] = c.abs_tol;
  d["config"] = c.canonical();
  bool all = true;
  d["results"] = nlohmann::ordered_json::array();
  for (const auto& v : results) {
    d["results"].push_back(to_json(v));
    all = all && v.passed;
  }
  d["passed"] = all;
  return d;
}

bool all_passed(const std::vector<Verification>& r) {
  for (const auto& v : r)
    if (!v.passed) return false;
  return true;
}

}  // namespace

std::string render(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

nlohmann::ordered_json verify_document(const RunConfig& c, const std::vector<Verification>& results) {
  return document(c, "verify", results);
}

std::vector<std::string> verify_groups(const std::string& preset) {
  static const std::vector<std::string> every{"identity",  "bands",     "assembly",     "divergence",
                                              "reversal",  "separation", "pre_critical", "fits"};
  if (preset == "all") return every;
  if (preset == "default") return {"identity", "bands"};
  for (const auto& g : every)
    if (g == preset) return {g};
  throw ConfigError("unknown verify preset '" + preset + "' (use default, all, or one of identity, bands, "
                    "assembly, divergence, reversal, separation, pre_critical, fits)");
}

std::vector<Verification> run_verify_group(const std::string& g, const RunConfig& c) {
  const int th = c.threads;
  std::vector<Verification> r;
  if (g == "identity") {
    for (int n : {2, 3})
      for (auto& v : suites::identity_suite(n, 20, c.seed, th)) r.push_back(std::move(v));
  } else if (g == "bands") {
    for (const auto& b : estimates::appendix_bands()) r.push_back(suites::from_band(b));
  } else if (g == "assembly") {
    for (int comp : {1, 2}) r.push_back(suites::assembly_check(comp, 10, c.seed + 1, th));
  } else if (g == "divergence") {
    r.push_back(suites::divergence_check(10, c.seed + 2, th));
  } else if (g == "reversal") {
    r.push_back(suites::reversal_counts(th));
  } else if (g == "separation") {
    r.push_back(suites::separation(-0.75, true, th));
    r.push_back(suites::separation(-0.3, false, th));
  } else if (g == "pre_critical") {
    r.push_back(suites::pre_critical(th));
  } else if (g == "fits") {
    r = suites::exponent_fits(th);
  } else {
    throw ConfigError("unknown verification group '" + g + "'");
  }
  return r;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<Verification> all;
  for (const auto& g : verify_groups(c.preset))
    for (auto& v : run_verify_group(g, c)) all.push_back(std::move(v));
  out << render(verify_document(c, all));
  return all_passed(all) ? kOk : kFailed;
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  std::vector<Verification> results;
  if (c.preset == "a=-0.75" || c.preset == "default") {
    results = suites::exponent_fits(c.threads);
  } else if (c.preset == "custom") {
    // Wall zeros of w_1 at the first tangential position against t - 1.
    if (c.t.empty()) throw ConfigError("config field 't': the custom fit needs a t grid");
    const auto xp = positions(c).front();
    const auto f = reversal::velocity_probe(1, xp, profile(c));
    const auto grid = or_default(c.xn, suites::logspace(1e-3, 40.0, 24));
    const auto opt = scan_opts(c);
    Verification v;
    v.name = "fit/custom_t_minus_1";
    std::vector<std::pair<double, double>> samples;
    for (double t : c.t) {
      if (!(t > 1.0)) throw ConfigError("config field 't': the custom fit needs t > 1");
      if (const auto z = suites::wall_zero(f, t, grid, opt)) {
        samples.emplace_back(t - 1.0, z->x_n_star);
        v.metric("zero(t=" + num(t) + ")", z->x_n_star);
      }
    }
    const double target = (c.a + 0.5) / (2.0 * c.a - 1.0);
    v.metric("target", target);
    try {
      const auto fit = scaling::fit_exponent(samples, scaling::Sweep::t_minus_1);
      v.metric("exponent", fit.exponent);
      v.metric("r_squared", fit.r_squared);
      v.passed = std::abs(fit.exponent - target) <= 0.03;
    } catch (const scaling::InsufficientSpan& e) {
      v.note("fit", e.what());
    }
    results.push_back(v);
  } else {
    throw ConfigError("unknown fit preset '" + c.preset + "' (use a=-0.75 or custom)");
  }
  out << render(document(c, "fit", results));
  return all_passed(results) ? kOk : kFailed;
}

}  // namespace stokes_cli

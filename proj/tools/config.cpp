#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace stokes_cli {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number, got " + std::string(j.type_name()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(field, "must be finite");
  return v;
}

std::vector<double> spaced(const json& spec, const std::string& field, bool log) {
  if (!spec.is_array() || spec.size() != 3) field_error(field, "expected [lo, hi, count]");
  const double lo = number(spec[0], field), hi = number(spec[1], field);
  if (!spec[2].is_number_integer() || spec[2].get<long>() < 1) field_error(field, "count must be a positive integer");
  const int count = spec[2].get<int>();
  if (!(lo < hi) && count > 1) field_error(field, "needs lo < hi");
  if (log && !(lo > 0.0)) field_error(field, "logspace needs lo > 0");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    g.push_back(log ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
  }
  if (count > 1) g.back() = hi;
  return g;
}

}  // namespace

std::vector<double> parse_grid(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field)};
  if (j.is_array()) {
    std::vector<double> g;
    for (const auto& v : j) g.push_back(number(v, field));
    if (g.empty()) field_error(field, "grid is empty");
    return g;
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("logspace")) return spaced(j["logspace"], field, true);
    if (j.contains("linspace")) return spaced(j["linspace"], field, false);
  }
  field_error(field, "expected a list of numbers or {\"logspace\"|\"linspace\": [lo, hi, count]}");
}

nlohmann::ordered_json RunConfig::canonical() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["a"] = a;
  j["amplitude"] = amplitude;
  j["rel_tol"] = rel_tol;
  j["abs_tol"] = abs_tol;
  j["components"] = components;
  j["x_prime"] = x_prime;
  j["xn"] = xn;
  j["t"] = t;
  j["preset"] = preset;
  j["seed"] = seed;
  return j;
}

std::string RunConfig::hash() const {
  const std::string s = canonical().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"n",  "a", "amplitude", "rel_tol", "abs_tol", "components", "x_prime",
                                           "xn", "t", "preset",    "seed",    "threads", "out"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) field_error(k, "unknown field");
  RunConfig c;
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) field_error("n", "expected 2 or 3");
    c.n = j["n"].get<int>();
  }
  if (j.contains("a")) c.a = number(j["a"], "a");
  if (j.contains("amplitude")) c.amplitude = number(j["amplitude"], "amplitude");
  if (j.contains("rel_tol")) c.rel_tol = number(j["rel_tol"], "rel_tol");
  if (j.contains("abs_tol")) c.abs_tol = number(j["abs_tol"], "abs_tol");
  if (j.contains("components")) {
    const auto& v = j["components"];
    if (!v.is_array()) field_error("components", "expected a list of component indices");
    for (const auto& x : v) {
      if (!x.is_number_integer()) field_error("components", "indices must be integers");
      c.components.push_back(x.get<int>());
    }
  }
  if (j.contains("x_prime")) {
    const auto& v = j["x_prime"];
    if (!v.is_array() || v.empty()) field_error("x_prime", "expected a non-empty list of tangential positions");
    for (const auto& p : v) {
      std::vector<double> q;
      if (p.is_number()) q.push_back(number(p, "x_prime"));
      else if (p.is_array())
        for (const auto& x : p) q.push_back(number(x, "x_prime"));
      else field_error("x_prime", "each entry must be a number or a list of numbers");
      c.x_prime.push_back(q);
    }
  }
  if (j.contains("xn")) c.xn = parse_grid(j["xn"], "xn");
  if (j.contains("t")) c.t = parse_grid(j["t"], "t");
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) field_error("preset", "expected a string");
    c.preset = j["preset"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer() || j["threads"].get<int>() < 0) field_error("threads", "expected an integer >= 0");
    c.threads = j["threads"].get<int>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) field_error("out", "expected a path string");
    c.out = j["out"].get<std::string>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

void validate(const RunConfig& c) {
  if (c.n != 2 && c.n != 3) field_error("n", "must be 2 or 3");
  if (!(c.a > -1.0)) field_error("a", "must exceed -1");
  if (!(c.rel_tol > 0.0) || c.rel_tol >= 1.0) field_error("rel_tol", "must lie in (0, 1)");
  if (!(c.abs_tol > 0.0)) field_error("abs_tol", "must be positive");
  for (int k : c.components)
    if (k < 1 || k > c.n) field_error("components", "index " + std::to_string(k) + " outside 1..n");
  for (const auto& p : c.x_prime)
    if (static_cast<int>(p.size()) != c.n - 1)
      field_error("x_prime", "each position needs n - 1 = " + std::to_string(c.n - 1) + " entries");
  for (double v : c.xn)
    if (!(v > 0.0)) field_error("xn", "normal coordinates must be positive");
  for (double v : c.t)
    if (!(v > 0.0)) field_error("t", "times must be positive");
}

}  // namespace stokes_cli

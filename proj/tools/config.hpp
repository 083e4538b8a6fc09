// Run configuration for the command-line tool: JSON file plus flag
// overrides, validated before any computation.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace stokes_cli {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 2;
  double a = -0.5;
  double amplitude = 1.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::vector<int> components;              // empty: every component
  std::vector<std::vector<double>> x_prime;  // tangential positions, n - 1 entries each
  std::vector<double> xn;
  std::vector<double> t;
  std::string preset = "default";
  std::uint64_t seed = 1;
  int threads = 0;  // not part of the echoed config: outputs must not depend on it
  std::string out;

  // Canonical form echoed into output headers and hashed.
  nlohmann::ordered_json canonical() const;
  std::string hash() const;  // FNV-1a 64 of canonical().dump(), hex
};

// Grid spec: a list of numbers, or {"logspace": [lo, hi, count]} or
// {"linspace": [lo, hi, count]}.
std::vector<double> parse_grid(const nlohmann::json& j, const std::string& field);

// Reads and validates a JSON config; field errors name the field, parse
// errors carry the line and column.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

// Range and consistency checks shared by file and flag input.
void validate(const RunConfig& c);

}  // namespace stokes_cli

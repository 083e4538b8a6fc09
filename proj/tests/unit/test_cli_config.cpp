#include <doctest.h>

#include <sstream>

#include "commands.hpp"
#include "config.hpp"

using namespace stokes_cli;
using nlohmann::json;

TEST_CASE("grids") {
  const auto g = parse_grid(json::parse(R"({"logspace": [1e-3, 10, 5]})"), "xn");
  REQUIRE(g.size() == 5);
  CHECK(g.back() == 10.0);
  CHECK(parse_grid(json::parse("[1, 2, 3]"), "t") == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(parse_grid(json::parse(R"({"logspace": [0, 1, 3]})"), "xn"), ConfigError);
  CHECK_THROWS_AS(parse_grid(json::parse("[]"), "xn"), ConfigError);
}

TEST_CASE("config errors name the field") {
  try {
    config_from_json(json::parse(R"({"a": "big"})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"colour": 1})")), ConfigError);
  auto c = config_from_json(json::parse(R"({"n": 3, "x_prime": [[1.0]]})"));
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.x_prime = {{1.0, 2.0}};
  CHECK_NOTHROW(validate(c));
  c.a = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("hash ignores threads and output path") {
  RunConfig a, b;
  b.threads = 8;
  b.out = "elsewhere.json";
  CHECK(a.hash() == b.hash());
  b.a = 0.25;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("csv header and number format") {
  RunConfig c;
  const auto h = csv_header(c, "eval");
  CHECK(h.rfind("# stokes ", 0) == 0);
  CHECK(h.find("# config_hash " + c.hash()) != std::string::npos);
  CHECK(num(0.1) == "0.10000000000000001");
  CHECK(verify_groups("default") == std::vector<std::string>{"identity", "bands"});
  CHECK(verify_groups("all").size() == 8);
  CHECK_THROWS_AS(verify_groups("nonsense"), ConfigError);
}

TEST_CASE("eval with zero amplitude") {
  RunConfig c;
  c.amplitude = 0.0;
  c.x_prime = {{2.0}};
  c.xn = {0.3, 0.9};
  c.t = {1.1};
  std::ostringstream out;
  CHECK(cmd_eval(c, out) == kOk);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    CHECK(cells.at(4) == "0");
    ++rows;
  }
  CHECK(rows == 4);
}

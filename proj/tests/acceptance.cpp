// Acceptance run: every verification group once with one thread (timed), then
// the command-line tool with eight threads; the two verify documents must be
// byte-identical. Prints one PASS/FAIL line per criterion.
//
// usage: acceptance <path to stokes> [work dir]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "commands.hpp"

using namespace stokes_cli;
using hsstokes::suites::Verification;

namespace {

struct Criterion {
  std::string id;
  std::string what;
  std::string group;
  double budget_s;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string summary(const std::vector<Verification>& vs) {
  std::string s;
  for (const auto& v : vs)
    if (!v.passed) s += (s.empty() ? "failed: " : ", ") + v.name;
  return s.empty() ? "all checks passed" : s;
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <stokes executable> [work dir]\n", argv[0]);
    return 1;
  }
  const std::string tool = argv[1];
  const std::string dir = argc > 2 ? argv[2] : ".";

  const std::vector<Criterion> criteria{
      {"AC1", "kernel identities, n = 2 and 3", "identity", 300},
      {"AC2", "assembly against the direct oracle", "assembly", 600},
      {"AC3", "appendix estimate bands", "bands", 600},
      {"AC4", "reversal counts at a = -0.5", "reversal", 600},
      {"AC5", "separation pipeline", "separation", 900},
      {"AC6", "zero scaling exponents at a = -0.75", "fits", 1200},
      {"AC7", "sign structure before t = 1", "pre_critical", 600},
      {"AC8", "divergence-free probe", "divergence", 300},
  };

  RunConfig c;
  c.preset = "all";
  c.threads = 1;
  std::map<std::string, std::vector<Verification>> by_group;
  std::map<std::string, double> seconds;
  std::vector<Verification> all;
  bool ok = true;
  for (const auto& g : verify_groups("all")) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_verify_group(g, c);
    seconds[g] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all.insert(all.end(), r.begin(), r.end());
    by_group[g] = std::move(r);
  }
  const std::string one = dir + "/verify_threads1.json", eight = dir + "/verify_threads8.json";
  {
    std::ofstream f(one, std::ios::binary);
    f << render(verify_document(c, all));
  }

  for (const auto& cr : criteria) {
    const auto& vs = by_group.at(cr.group);
    bool pass = !vs.empty() && seconds[cr.group] < cr.budget_s;
    for (const auto& v : vs) pass = pass && v.passed;
    ok = ok && pass;
    std::printf("%s %s  %s (%.1f s, budget %.0f s): %s\n", cr.id.c_str(), pass ? "PASS" : "FAIL", cr.what.c_str(),
                seconds[cr.group], cr.budget_s, summary(vs).c_str());
  }

  const std::string cmd = "\"" + tool + "\" verify --preset all --threads 8 --out \"" + eight + "\"";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  const std::string a = read_file(one), b = read_file(eight);
  const bool same = code >= 0 && code != kConfigError && !a.empty() && a == b;
  ok = ok && same;
  std::printf("AC9 %s  verify --preset all, 1 vs 8 threads (%.1f s): %s\n", same ? "PASS" : "FAIL", dt,
              same ? ("byte-identical, " + std::to_string(a.size()) + " bytes").c_str()
                   : ("outputs differ or the run failed, exit code " + std::to_string(code)).c_str());
  return ok ? 0 : 1;
}

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hsstokes/kernels.hpp"
#include "hsstokes/quadrature.hpp"
#include "hsstokes/reversal.hpp"

using namespace stokes_cli;

int main(int argc, char** argv) {
  CLI::App app{"Half-space Stokes flow: evaluation, sign scans, zeros and verification"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  std::optional<std::string> preset;
  std::optional<int> threads, n;
  std::optional<double> a, tol;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset, "named preset (verify: default, all, or a group; fit: a=-0.75, custom)");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--threads", threads, "worker threads (default: STOKES_THREADS, else 1)")->check(CLI::NonNegativeNumber);
  app.add_option("--n", n, "space dimension")->check(CLI::IsMember({2, 3}));
  app.add_option("--a", a, "time exponent of the influx");
  app.add_option("--tol", tol, "relative quadrature tolerance");

  const std::map<std::string, std::pair<std::string, std::function<int(const RunConfig&, std::ostream&)>>> commands{
      {"eval", {"velocity components on a grid (CSV)", cmd_eval}},
      {"scan", {"sign-change intervals along x_n (CSV)", cmd_scan}},
      {"zeros", {"located zeros along x_n (CSV)", cmd_zeros}},
      {"beta", {"wall-adjacent interval endpoints against t (CSV)", cmd_beta}},
      {"regions", {"asymptotic region labels over |x'| and t (CSV)", cmd_regions}},
      {"fit", {"zero scaling exponents (JSON)", cmd_fit}},
      {"verify", {"verification suites (JSON)", cmd_verify}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (preset) c.preset = *preset;
    if (threads) c.threads = *threads;
    if (n) c.n = *n;
    if (a) c.a = *a;
    if (tol) c.rel_tol = *tol;
    if (!out_path.empty()) c.out = out_path;
    validate(c);

    const auto& name = app.get_subcommands().front()->get_name();
    if (name == "fit" && !preset && config_path.empty()) c.preset = "a=-0.75";
    std::ostringstream buf;
    const int code = commands.at(name).second(c, buf);
    if (c.out.empty()) {
      std::cout << buf.str();
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!(f << buf.str())) {
        std::cerr << "error: cannot write " << c.out << "\n";
        return kConfigError;
      }
    }
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hsstokes::NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const hsstokes::reversal::IndeterminateRegion& e) {
    std::cerr << "unresolved sign at x_n = " << e.xn << ", t = " << e.t << ": " << e.what() << "\n";
    return kNonConvergence;
  } catch (const hsstokes::reversal::LostBracket& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const hsstokes::reversal::Inconclusive& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const hsstokes::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}

// Subcommands of the stokes tool. Each writes its whole output to the given
// stream and returns the process exit code.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "hsstokes/suites.hpp"

namespace stokes_cli {

enum Exit : int { kOk = 0, kConfigError = 1, kFailed = 2, kNonConvergence = 3 };

int cmd_eval(const RunConfig& c, std::ostream& out);
int cmd_scan(const RunConfig& c, std::ostream& out);
int cmd_zeros(const RunConfig& c, std::ostream& out);
int cmd_beta(const RunConfig& c, std::ostream& out);
int cmd_regions(const RunConfig& c, std::ostream& out);
int cmd_fit(const RunConfig& c, std::ostream& out);
int cmd_verify(const RunConfig& c, std::ostream& out);

// Verification groups behind a verify preset, in output order. "default" is
// identity + bands, "all" is every group.
std::vector<std::string> verify_groups(const std::string& preset);
std::vector<hsstokes::suites::Verification> run_verify_group(const std::string& group, const RunConfig& c);

nlohmann::ordered_json verify_document(const RunConfig& c, const std::vector<hsstokes::suites::Verification>& results);
// The exact bytes cmd_verify writes for a document.
std::string render(const nlohmann::ordered_json& doc);

// Comment lines opening every CSV file.
std::string csv_header(const RunConfig& c, const std::string& command);
std::string num(double v);  // %.17g

}  // namespace stokes_cli

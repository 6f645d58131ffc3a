#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/scenario.hpp"

namespace surfhol::cli {

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand. Throws UsageError (and friends) for config problems;
/// numerical trouble during a check is reported with pass = false.
Outcome run_scenario(const std::string& subcommand, const Scenario& scenario);

/// Full command line: parse flags, load the config, run, write reports.
/// Returns 0 (all checks pass), 1 (a check failed) or 2 (usage/config error).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surfhol::cli

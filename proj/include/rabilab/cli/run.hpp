#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "rabilab/cli/config.hpp"
#include "rabilab/cli/output.hpp"

namespace rabilab::cli {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_config_error = 2, exit_numeric_failure = 3 };

/// Executes one command and writes report.json, the CSV files and
/// plot_<command>.py into config.output_dir.  Library errors propagate.
Report execute(const RunConfig& config);

/// execute() with error handling: returns the exit code and names the first
/// failing check (or the error) on err.  A one-line summary goes to out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the config file with command-line overrides, checks that its
/// command matches, then run().
int run_from_file(const std::string& command, const std::filesystem::path& config_path, const Overrides& overrides,
                  std::ostream& out, std::ostream& err);

}  // namespace rabilab::cli

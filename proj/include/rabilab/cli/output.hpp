#pragma once

// Artifacts of a run: the JSON report, CSV header blocks and the plotting
// script template.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rabilab/cli/config.hpp"
#include "rabilab/csv.hpp"

namespace rabilab::cli {

/// Library version baked in at build time.
std::string version();

struct Check {
    std::string name;
    bool passed = false;
    /// The measured quantity; for threshold checks the value compared with tolerance.
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

class Report {
public:
    explicit Report(const RunConfig& config);

    /// Passes iff residual <= tolerance (a NaN residual fails).
    void add_threshold(const std::string& name, double residual, double tolerance, const std::string& detail = "");
    /// A pass/fail property with a reported value.
    void add_flag(const std::string& name, bool passed, double value, const std::string& detail = "");
    void add_residual(const std::string& name, double value);
    void add_file(const std::filesystem::path& file);

    const std::vector<Check>& checks() const { return checks_; }
    bool all_passed() const;
    /// nullptr if every check passed.
    const Check* first_failure() const;

    /// Fixed field order: tool, version, command, seed, tolerance_scale,
    /// inputs, checks, residuals, files, passed.
    nlohmann::ordered_json to_json() const;

private:
    const RunConfig& config_;
    std::vector<Check> checks_;
    std::vector<std::pair<std::string, double>> residuals_;
    std::vector<std::string> files_;
};

/// tool, version, command, seed, tolerance_scale, every resolved key, then extra.
csv::HeaderLines run_header(const RunConfig& config, const csv::HeaderLines& extra = {});

/// Writes text to dir/name, returning the path.  Throws ValidationError if the
/// file cannot be written.
std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text);

/// A matplotlib script that plots every CSV file listed, first column on the
/// x axis, with logarithmic axes when log_axes is set.
std::string plot_script(const std::string& command, const std::vector<std::string>& csv_files, bool log_axes);

}  // namespace rabilab::cli

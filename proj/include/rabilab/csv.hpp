#pragma once

// Plain-text CSV emission shared by reports and trajectories.  Every file
// opens with a block of '#' comment lines, followed by one header row.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace rabilab::csv {

/// Shortest decimal string that parses back to the same double.
std::string format_real(double x);

/// RFC-4180 quoting: fields containing a comma, quote or newline are quoted
/// and embedded quotes doubled.
std::string quote(const std::string& field);

using HeaderLines = std::vector<std::pair<std::string, std::string>>;

class Writer {
public:
    Writer(std::ostream& out, const HeaderLines& header, const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace rabilab::csv

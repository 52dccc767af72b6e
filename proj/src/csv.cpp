#include "rabilab/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "rabilab/errors.hpp"

namespace rabilab::csv {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

Writer::Writer(std::ostream& out, const HeaderLines& header, const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
    for (const auto& [key, value] : header) out_ << "# " << key << " = " << value << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << quote(columns[i]);
    out_ << '\n';
}

void Writer::row(const std::vector<double>& values) {
    if (values.size() != width_) throw DimensionMismatch("csv::Writer: row width differs from header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_real(values[i]);
    out_ << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw DimensionMismatch("csv::Writer: row width differs from header");
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << quote(fields[i]);
    out_ << '\n';
}

}  // namespace rabilab::csv

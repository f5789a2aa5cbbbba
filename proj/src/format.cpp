#include "relbelief/format.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relbelief {

std::string format_number(double value, std::optional<int> digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[512];
    std::to_chars_result res{};
    if (digits) {
        if (*digits < 0 || *digits > 60) throw std::invalid_argument("format_number: digits must be in [0, 60]");
        res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, *digits);
    } else {
        res = std::to_chars(buf, buf + sizeof buf, value);
    }
    if (res.ec != std::errc{}) throw std::runtime_error("format_number: buffer too small");
    std::string out(buf, res.ptr);
    if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<std::string> fields) {
    if (fields.size() != header_.size()) throw std::invalid_argument("CsvTable: row width does not match the header");
    rows_.push_back(std::move(fields));
}

namespace {

void write_field(std::ostream& out, const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        write_field(out, fields[i]);
    }
    out << '\n';
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
    write_line(out, header_);
    for (const auto& row : rows_) write_line(out, row);
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

}  // namespace relbelief

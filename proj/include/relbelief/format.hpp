#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace relbelief {

/// Shortest decimal string that round-trips to the same double, or, with
/// `digits`, the correctly rounded fixed-point form with that many decimals
/// (exact binary ties go to even).
std::string format_number(double value, std::optional<int> digits = std::nullopt);

/// Comma-separated table with a header row and LF line endings. Fields
/// containing a comma, quote or newline are quoted.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> fields);
    std::size_t rows() const noexcept { return rows_.size(); }
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& data() const noexcept { return rows_; }

    void write(std::ostream& out) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace relbelief

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bandspec {

inline constexpr int kCsvSchemaVersion = 1;

/// A header plus string cells. Every file written by the tools starts with a
/// "# bandspec schema_version=<v> kind=<kind>" comment line, then the header.
struct CsvTable {
    std::string kind;
    int schema_version = kCsvSchemaVersion;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

void write_csv(std::ostream& os, const CsvTable& table);
/// Throws InvalidArgument on a malformed file (missing schema line, ragged rows).
CsvTable read_csv(std::istream& is);

}  // namespace bandspec

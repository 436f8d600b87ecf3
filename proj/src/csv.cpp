#include "bandspec/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "bandspec/errors.hpp"

namespace bandspec {

namespace {

// RFC 4180 quoting: a cell containing a comma or quote is wrapped in quotes
// with inner quotes doubled. Cells never span lines.
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c != '"') out.back() += c;
            else if (i + 1 < line.size() && line[i + 1] == '"') out.back() += line[++i];
            else quoted = false;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw InvalidArgument("unterminated quote in CSV line: " + line);
    return out;
}

std::string quote(const std::string& cell) {
    if (cell.find_first_of("\n\r") != std::string::npos) throw InvalidArgument("line break in CSV cell");
    if (cell.find_first_of(",\"") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote(cells[i]);
    }
    return out;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InvalidArgument("no column named '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& column) const {
    return std::strtod(rows.at(row).at(column_index(column)).c_str(), nullptr);
}

std::string format_double(double x) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    os << "# bandspec schema_version=" << table.schema_version << " kind=" << table.kind << '\n';
    os << join(table.columns) << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw InvalidArgument("ragged CSV row");
        os << join(row) << '\n';
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# bandspec schema_version=", 0) != 0)
        throw InvalidArgument("missing bandspec schema line");
    {
        std::istringstream ss(line.substr(2));
        std::string tok;
        while (ss >> tok) {
            if (tok.rfind("schema_version=", 0) == 0) t.schema_version = std::atoi(tok.c_str() + 15);
            if (tok.rfind("kind=", 0) == 0) t.kind = tok.substr(5);
        }
    }
    if (!std::getline(is, line)) throw InvalidArgument("missing CSV header");
    t.columns = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.columns.size()) throw InvalidArgument("ragged CSV row: " + line);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace bandspec

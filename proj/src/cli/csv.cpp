#include "subweibull/cli/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "subweibull/errors.hpp"

namespace subweibull::cli {

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
}

void CsvTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const std::size_t j = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        const Cell& c = r[j];
        if (const auto* d = std::get_if<double>(&c)) out.push_back(*d);
        else if (const auto* i = std::get_if<long long>(&c)) out.push_back(static_cast<double>(*i));
        else out.push_back(std::strtod(std::get<std::string>(c).c_str(), nullptr));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string to_csv(const CsvTable& table) {
    std::string out = "# schema: " + table.schema + "\n";
    for (std::size_t j = 0; j < table.columns.size(); ++j) out += (j ? "," : "") + table.columns[j];
    out += '\n';
    for (const auto& r : table.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out += ',';
            out += format_cell(r[j]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (ch == '"') quoted = false;
            else cur += ch;
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# schema: ", 0) == 0) {
            t.schema = line.substr(10);
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_line(line);
        if (!header) {
            t.columns = std::move(cells);
            header = true;
            continue;
        }
        std::vector<Cell> row(cells.begin(), cells.end());
        t.add_row(std::move(row));
    }
    if (!header) throw std::invalid_argument("csv has no header row");
    return t;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace subweibull::cli

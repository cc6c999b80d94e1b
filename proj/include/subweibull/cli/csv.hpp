#pragma once

#include <string>
#include <variant>
#include <vector>

namespace subweibull::cli {

using Cell = std::variant<double, long long, std::string>;

struct CsvTable {
    std::string schema;  // "<name>/<version>", written as the first comment line
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column_index(const std::string& name) const;  // throws std::out_of_range
    void add_row(std::vector<Cell> row);
    std::vector<double> numeric_column(const std::string& name) const;
};

std::string format_double(double v);
std::string format_cell(const Cell& c);
std::string to_csv(const CsvTable& table);
// Cells come back as strings; numeric_column converts on demand.
CsvTable parse_csv(const std::string& text);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace subweibull::cli

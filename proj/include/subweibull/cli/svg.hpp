#pragma once

#include <string>
#include <vector>

#include "subweibull/cli/csv.hpp"

namespace subweibull::cli {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    double slope = 0.0;  // filled under loglog
    double slope_se = 0.0;
};

// Rows are grouped into series by the values of series_columns (in first-seen order).
// Throws std::invalid_argument on nonpositive values under loglog or fewer than one row.
std::vector<PlotSeries> plot_series(const CsvTable& table, const std::string& x, const std::string& y, bool loglog,
                                    const std::vector<std::string>& series_columns = {});
std::string render_plot(const CsvTable& table, const std::string& x, const std::string& y, bool loglog,
                        const std::vector<std::string>& series_columns = {});
void emit_plot(const CsvTable& table, const std::string& x, const std::string& y, bool loglog,
               const std::string& path, const std::vector<std::string>& series_columns = {});

std::string format_slope(double slope);  // 4 decimals

}  // namespace subweibull::cli

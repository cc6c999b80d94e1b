#include "subweibull/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "subweibull/stats.hpp"

namespace subweibull::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 180, kTop = 30, kBottom = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

}  // namespace

std::string format_slope(double slope) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", slope);
    return buf;
}

std::vector<PlotSeries> plot_series(const CsvTable& table, const std::string& x, const std::string& y, bool loglog,
                                    const std::vector<std::string>& series_columns) {
    const auto xs = table.numeric_column(x);
    const auto ys = table.numeric_column(y);
    if (xs.empty()) throw std::invalid_argument("plot: table has no rows");
    std::vector<std::size_t> sidx;
    for (const auto& c : series_columns) sidx.push_back(table.column_index(c));
    std::vector<PlotSeries> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw std::invalid_argument("plot: non-finite value in row " + std::to_string(i));
        if (loglog && (xs[i] <= 0.0 || ys[i] <= 0.0))
            throw std::invalid_argument("plot: nonpositive value under loglog in row " + std::to_string(i));
        std::string label;
        for (std::size_t s = 0; s < sidx.size(); ++s)
            label += (s ? " " : "") + series_columns[s] + "=" + format_cell(table.rows[i][sidx[s]]);
        auto it = std::find_if(out.begin(), out.end(), [&](const PlotSeries& p) { return p.label == label; });
        if (it == out.end()) {
            out.push_back({label, {}, {}, 0.0, 0.0});
            it = out.end() - 1;
        }
        it->x.push_back(xs[i]);
        it->y.push_back(ys[i]);
    }
    if (loglog)
        for (auto& s : out)
            if (s.x.size() >= 2) {
                const auto fit = loglog_fit(s.x, s.y);
                s.slope = fit.slope;
                s.slope_se = fit.slope_se;
            }
    return out;
}

std::string render_plot(const CsvTable& table, const std::string& x, const std::string& y, bool loglog,
                        const std::vector<std::string>& series_columns) {
    const auto series = plot_series(table, x, y, loglog, series_columns);
    auto tx = [&](double v) { return loglog ? std::log10(v) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, tx(s.x[i])), x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, tx(s.y[i])), y1 = std::max(y1, tx(s.y[i]));
        }
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return kTop + ph - (tx(v) - y0) / (y1 - y0) * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
    // axes
    o += "<line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) +
         "\" y2=\"" + num(kTop + ph) + "\" stroke=\"black\"/>\n";
    o += "<line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
         num(kTop + ph) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        const double vx = loglog ? std::pow(10.0, fx) : fx, vy = loglog ? std::pow(10.0, fy) : fy;
        const double sx = kLeft + pw * i / 4.0, sy = kTop + ph - ph * i / 4.0;
        o += "<text x=\"" + num(sx) + "\" y=\"" + num(kTop + ph + 15) + "\" text-anchor=\"middle\">" +
             tick_label(vx) + "</text>\n";
        o += "<text x=\"" + num(kLeft - 5) + "\" y=\"" + num(sy + 4) + "\" text-anchor=\"end\">" + tick_label(vy) +
             "</text>\n";
    }
    const std::string scale = loglog ? " (log scale)" : "";
    o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(x + scale) + "</text>\n";
    o += "<text x=\"15\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         num(kTop + ph / 2) + ")\">" + escape(y + scale) + "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            o += "<circle cx=\"" + num(px(series[s].x[i])) + "\" cy=\"" + num(py(series[s].y[i])) +
                 "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
        std::string legend = series[s].label.empty() ? y : series[s].label;
        if (loglog && series[s].x.size() >= 2) legend += "  slope = " + format_slope(series[s].slope);
        o += "<text class=\"legend\" x=\"" + num(kLeft + pw + 10) + "\" y=\"" + num(kTop + 14.0 * (s + 1)) +
             "\" fill=\"" + color + "\">" + escape(legend) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

void emit_plot(const CsvTable& table, const std::string& x, const std::string& y, bool loglog,
               const std::string& path, const std::vector<std::string>& series_columns) {
    write_text_file(path, render_plot(table, x, y, loglog, series_columns));
}

}  // namespace subweibull::cli

#pragma once

#include <string>
#include <vector>

namespace arratia::plot {

struct Line {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err; ///< optional half-widths of error bars
};

struct Bars {
    std::vector<std::string> groups; ///< categories along the axis
    std::vector<std::string> series; ///< one bar per series within a group
    /// values[s][g], errors[s][g] (errors may be empty).
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> errors;
};

/// Whitespace-separated columns with a '#' header line.
void write_dat(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// Minimal SVG renderers. Throw std::invalid_argument("nothing to plot")
/// when there is no finite data.
void write_line_chart(const std::string& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Line>& lines, bool log_x = false);
void write_grouped_bars(const std::string& path, const std::string& title, const std::string& y_label,
                        const Bars& bars);

} // namespace arratia::plot

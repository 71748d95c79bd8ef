#include "arratia/plot.hpp"

#include "arratia/drift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace arratia::plot {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string esc(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v)
    {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    bool empty() const { return !(lo <= hi); }
    void pad()
    {
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            lo -= 0.5 * std::max(1e-3, std::abs(lo));
            hi += 0.5 * std::max(1e-3, std::abs(hi));
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

std::string header(const std::string& title)
{
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
      << "</text>\n";
    return s.str();
}

std::string y_axis(const Range& y, const std::string& label)
{
    std::ostringstream s;
    const double x0 = kLeft, y0 = kHeight - kBottom, y1 = kTop;
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = y.lo + (y.hi - y.lo) * k / 4.0;
        const double py = y0 - (y0 - y1) * k / 4.0;
        s << "<line x1=\"" << x0 - 4 << "\" y1=\"" << num(py) << "\" x2=\"" << x0 << "\" y2=\"" << num(py)
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << x0 - 6 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << tick(v)
          << "</text>\n";
    }
    s << "<text transform=\"translate(16," << num((y0 + y1) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << esc(label) << "</text>\n";
    return s.str();
}

void save(const std::string& path, const std::string& body)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << body << "</svg>\n";
}

} // namespace

void write_dat(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << '#';
    for (const auto& c : columns)
        out << ' ' << c;
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? " " : "") << format_real(r[i]);
        out << '\n';
    }
}

void write_line_chart(const std::string& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Line>& lines, bool log_x)
{
    Range xr, yr;
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    for (const auto& l : lines)
        for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
            if (log_x && !(l.x[i] > 0.0))
                continue;
            xr.add(tx(l.x[i]));
            const double e = i < l.err.size() ? l.err[i] : 0.0;
            yr.add(l.y[i] - e);
            yr.add(l.y[i] + e);
        }
    if (xr.empty() || yr.empty())
        throw std::invalid_argument("nothing to plot");
    xr.pad();
    yr.pad();
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto px = [&](double v) { return x0 + (tx(v) - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
    auto py = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

    std::ostringstream s;
    s << header(title) << y_axis(yr, y_label);
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = xr.lo + (xr.hi - xr.lo) * k / 4.0;
        const double p = x0 + (x1 - x0) * k / 4.0;
        s << "<line x1=\"" << num(p) << "\" y1=\"" << y0 << "\" x2=\"" << num(p) << "\" y2=\"" << y0 + 4
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(p) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
          << tick(log_x ? std::pow(10.0, v) : v) << "</text>\n";
    }
    s << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << esc(x_label) << "</text>\n";
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& l = lines[li];
        const char* color = kColors[li % std::size(kColors)];
        std::string pts;
        for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
            if (!std::isfinite(l.y[i]) || (log_x && !(l.x[i] > 0.0)))
                continue;
            pts += num(px(l.x[i])) + "," + num(py(l.y[i])) + " ";
            s << "<circle cx=\"" << num(px(l.x[i])) << "\" cy=\"" << num(py(l.y[i])) << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
            if (i < l.err.size() && l.err[i] > 0.0)
                s << "<line x1=\"" << num(px(l.x[i])) << "\" y1=\"" << num(py(l.y[i] - l.err[i])) << "\" x2=\""
                  << num(px(l.x[i])) << "\" y2=\"" << num(py(l.y[i] + l.err[i])) << "\" stroke=\"" << color
                  << "\"/>\n";
        }
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << pts << "\"/>\n";
        s << "<text x=\"" << x1 + 10 << "\" y=\"" << kTop + 16 * (li + 1) << "\" fill=\"" << color << "\">"
          << esc(l.label) << "</text>\n";
    }
    save(path, s.str());
}

void write_grouped_bars(const std::string& path, const std::string& title, const std::string& y_label,
                        const Bars& bars)
{
    Range yr;
    yr.add(0.0);
    bool any = false;
    for (std::size_t si = 0; si < bars.values.size(); ++si)
        for (std::size_t g = 0; g < bars.values[si].size(); ++g) {
            const double v = bars.values[si][g];
            if (!std::isfinite(v))
                continue;
            any = true;
            const double e = si < bars.errors.size() && g < bars.errors[si].size() ? bars.errors[si][g] : 0.0;
            yr.add(v + e);
            yr.add(v - e);
        }
    if (!any || bars.groups.empty())
        throw std::invalid_argument("nothing to plot");
    yr.pad();
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto py = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };
    const double group_w = (x1 - x0) / static_cast<double>(bars.groups.size());
    const double bar_w = 0.8 * group_w / static_cast<double>(std::max<std::size_t>(1, bars.values.size()));

    std::ostringstream s;
    s << header(title) << y_axis(yr, y_label);
    s << "<line x1=\"" << x0 << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << x1 << "\" y2=\"" << num(py(0.0))
      << "\" stroke=\"black\"/>\n";
    for (std::size_t g = 0; g < bars.groups.size(); ++g)
        s << "<text x=\"" << num(x0 + group_w * (g + 0.5)) << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
          << esc(bars.groups[g]) << "</text>\n";
    for (std::size_t si = 0; si < bars.values.size(); ++si) {
        const char* color = kColors[si % std::size(kColors)];
        for (std::size_t g = 0; g < bars.values[si].size() && g < bars.groups.size(); ++g) {
            const double v = bars.values[si][g];
            if (!std::isfinite(v))
                continue;
            const double left = x0 + group_w * g + 0.1 * group_w + bar_w * si;
            const double top = py(std::max(v, 0.0)), bottom = py(std::min(v, 0.0));
            s << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(bar_w) << "\" height=\""
              << num(bottom - top) << "\" fill=\"" << color << "\"/>\n";
            const double e = si < bars.errors.size() && g < bars.errors[si].size() ? bars.errors[si][g] : 0.0;
            if (e > 0.0) {
                const double c = left + bar_w / 2;
                s << "<line x1=\"" << num(c) << "\" y1=\"" << num(py(v - e)) << "\" x2=\"" << num(c) << "\" y2=\""
                  << num(py(v + e)) << "\" stroke=\"black\"/>\n";
            }
        }
        const std::string label = si < bars.series.size() ? bars.series[si] : std::to_string(si);
        s << "<text x=\"" << x1 + 10 << "\" y=\"" << kTop + 16 * (si + 1) << "\" fill=\"" << color << "\">"
          << esc(label) << "</text>\n";
    }
    save(path, s.str());
}

} // namespace arratia::plot

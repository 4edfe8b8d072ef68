#pragma once

// Minimal static SVG line charts (time series and log-log plots),
// no rendering dependencies.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "symred/types.hpp"

namespace symred::svg {

struct Series {
    std::string name;
    VectorX x;
    VectorX y;
};

inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::string& xlabel, const std::string& ylabel,
                             const std::vector<Series>& series, bool loglog = false) {
    const int width = 640, height = 420, margin = 56;
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto tf = [loglog](double v) { return loglog ? std::log10(v) : v; };
    for (const auto& s : series)
        for (int i = 0; i < s.x.size(); ++i) {
            if (loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            xmin = std::min(xmin, tf(s.x[i]));
            xmax = std::max(xmax, tf(s.x[i]));
            ymin = std::min(ymin, tf(s.y[i]));
            ymax = std::max(ymax, tf(s.y[i]));
        }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    auto px = [&](double v) {
        return margin + (tf(v) - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto py = [&](double v) {
        return height - margin - (tf(v) - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::ofstream os(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << height / 2 << ")\">" << ylabel << "</text>\n";
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
       << width - 2 * margin << "\" height=\"" << height - 2 * margin
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    int c = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[c % 6]
           << "\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i < s.x.size(); ++i) {
            if (loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            os << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14 * (c + 1)
           << "\" font-size=\"10\" fill=\"" << palette[c % 6] << "\">" << s.name
           << "</text>\n";
        ++c;
    }
    os << "</svg>\n";
}

} // namespace symred::svg

#ifndef ERGOLAT_TOOLS_SVG_HPP
#define ERGOLAT_TOOLS_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace ergolat::cli {

/// One polyline on a plot. Colors cycle through a fixed palette by index.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

namespace detail {

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
}

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
}

} // namespace detail

/// Minimal self-contained line plot: axes, five ticks per axis, labeled
/// series as polylines. Pure function of its arguments, so byte-identical
/// across reruns.
inline std::string line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series) {
    constexpr int W = 640, H = 400;
    constexpr double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    static const char* palette[] = {"#1f6fb2", "#c23b22", "#2e8b57", "#8a2be2"};

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    if (x_max == x_min) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_max == y_min) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const double px = (W - ml - mr) / (x_max - x_min);
    const double py = (H - mt - mb) / (y_max - y_min);
    auto sx = [&](double x) { return ml + (x - x_min) * px; };
    auto sy = [&](double y) { return H - mb - (y - y_min) * py; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" +
           title + "</text>\n";

    // Axes.
    out += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(H - mb) + "\" x2=\"" +
           detail::fmt2(W - mr) + "\" y2=\"" + detail::fmt2(H - mb) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(mt) + "\" x2=\"" +
           detail::fmt2(ml) + "\" y2=\"" + detail::fmt2(H - mb) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        const double tx = sx(fx), ty = sy(fy);
        out += "<line x1=\"" + detail::fmt2(tx) + "\" y1=\"" + detail::fmt2(H - mb) + "\" x2=\"" +
               detail::fmt2(tx) + "\" y2=\"" + detail::fmt2(H - mb + 5) +
               "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + detail::fmt2(tx) + "\" y=\"" + detail::fmt2(H - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt6(fx) + "</text>\n";
        out += "<line x1=\"" + detail::fmt2(ml - 5) + "\" y1=\"" + detail::fmt2(ty) + "\" x2=\"" +
               detail::fmt2(ml) + "\" y2=\"" + detail::fmt2(ty) +
               "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + detail::fmt2(ml - 8) + "\" y=\"" + detail::fmt2(ty + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt6(fy) + "</text>\n";
    }

    out += "<text x=\"" + detail::fmt2(ml + (W - ml - mr) / 2.0) + "\" y=\"" +
           detail::fmt2(H - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + detail::fmt2(mt + (H - mt - mb) / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 18 " +
           detail::fmt2(mt + (H - mt - mb) / 2.0) + ")\">" + y_label + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 4];
        std::string pts;
        for (const auto& [x, y] : series[si].points) {
            if (!pts.empty()) pts += " ";
            pts += detail::fmt2(sx(x)) + "," + detail::fmt2(sy(y));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = mt + 16.0 * static_cast<double>(si);
        out += "<line x1=\"" + detail::fmt2(W - mr - 140) + "\" y1=\"" + detail::fmt2(ly) +
               "\" x2=\"" + detail::fmt2(W - mr - 120) + "\" y2=\"" + detail::fmt2(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        out += "<text x=\"" + detail::fmt2(W - mr - 114) + "\" y=\"" + detail::fmt2(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + series[si].label +
               "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

} // namespace ergolat::cli

#endif // ERGOLAT_TOOLS_SVG_HPP

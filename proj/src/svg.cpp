#include "deepchest/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace deepchest {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

std::string render_line_chart(const std::vector<ChartSeries>& series, const ChartOptions& options) {
    const double w = options.width;
    const double h = options.height;
    const double left = 70, right = w - 180, top = 40, bottom = h - 50;

    bool any_points = false;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!any_points) {
                x_min = x_max = x;
                y_min = y_max = y;
                any_points = true;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const auto map_x = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    const auto map_y = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << " " << options.height
        << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";
    if (!options.title.empty())
        out << "<text x=\"" << px((left + right) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(options.title)
            << "</text>\n";

    // Axes.
    out << "<line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(right)
        << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
        << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";

    const int n_ticks = 5;
    for (int k = 0; k <= n_ticks; ++k) {
        const double fx = x_min + (x_max - x_min) * k / n_ticks;
        const double xp = map_x(fx);
        out << "<line x1=\"" << px(xp) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(xp)
            << "\" y2=\"" << px(bottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(xp) << "\" y=\"" << px(bottom + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_text(fx) << "</text>\n";

        const double fy = y_min + (y_max - y_min) * k / n_ticks;
        const double yp = map_y(fy);
        out << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(yp) << "\" x2=\"" << px(left)
            << "\" y2=\"" << px(yp) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(left - 8) << "\" y=\"" << px(yp + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_text(fy) << "</text>\n";
    }
    if (!options.x_label.empty())
        out << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px(h - 12)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape_xml(options.x_label) << "</text>\n";
    if (!options.y_label.empty())
        out << "<text x=\"16\" y=\"" << px((top + bottom) / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 16 " << px((top + bottom) / 2) << ")\">"
            << escape_xml(options.y_label) << "</text>\n";

    if (!any_points)
        out << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px((top + bottom) / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
            << "fill=\"#777777\">no data</text>\n";

    int color_idx = 0;
    for (const auto& s : series) {
        const char* color = kPalette[color_idx % kPaletteSize];
        if (!s.points.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            bool first = true;
            for (const auto& [x, y] : s.points) {
                if (!first) out << ' ';
                out << px(map_x(x)) << ',' << px(map_y(y));
                first = false;
            }
            out << "\"/>\n";
        }
        const double ly = top + 16.0 * color_idx;
        out << "<rect x=\"" << px(right + 12) << "\" y=\"" << px(ly - 8)
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << px(right + 26) << "\" y=\"" << px(ly + 1)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label)
            << "</text>\n";
        ++color_idx;
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace deepchest

#ifndef DEEPCHEST_SVG_HPP
#define DEEPCHEST_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace deepchest {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points; // (x, y)
};

struct ChartOptions {
    int width = 960;
    int height = 540;
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Standalone SVG line chart: axes with tick labels, a legend, one polyline
/// per series (and nothing else rendered as a polyline), no external assets.
/// Series without points render a "no data" note instead of a line.
std::string render_line_chart(const std::vector<ChartSeries>& series, const ChartOptions& options);

} // namespace deepchest

#endif

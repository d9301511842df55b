#pragma once

#include <string>
#include <utility>
#include <vector>

namespace covo::svg {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), y plotted on a log axis
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// One self-contained SVG document with the charts stacked vertically.
/// Output depends only on the input; non-positive y values sit on the axis floor.
std::string render(const std::vector<Chart>& charts);

}  // namespace covo::svg

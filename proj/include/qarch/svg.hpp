#pragma once

#include <string>
#include <vector>

namespace qarch::cli {

struct Series {
    std::string label;
    std::string color;  // empty picks from a fixed palette
    std::vector<double> x;
    std::vector<double> y;
};

// Self-contained polyline chart with axes, ticks, grid and a legend when
// more than one series is given. Output bytes depend only on the inputs.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series,
                              int width = 720, int height = 440);

}  // namespace qarch::cli

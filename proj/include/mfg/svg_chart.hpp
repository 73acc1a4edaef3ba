#pragma once

#include <string>
#include <vector>

namespace mfg {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> std_dev;
};

// Self-contained SVG line chart: mean line plus a +/- std band. log_y
// switches the y axis to log10 (non-positive values clamp to the smallest
// positive point in the series).
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const SvgSeries& series, bool log_y);

} // namespace mfg

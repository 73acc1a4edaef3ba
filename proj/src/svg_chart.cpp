#include "mfg/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mfg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const SvgSeries& series, bool log_y) {
    const std::size_t n = series.x.size();
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(title) << "</text>\n";

    if (n >= 1) {
        double x_lo = series.x.front();
        double x_hi = series.x.back();
        if (x_hi == x_lo) x_hi = x_lo + 1.0;

        double min_pos = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = series.mean[i] - series.std_dev[i];
            if (lo > 0.0) min_pos = std::min(min_pos, lo);
            if (series.mean[i] > 0.0) min_pos = std::min(min_pos, series.mean[i]);
        }
        if (!std::isfinite(min_pos)) min_pos = 1e-12;

        auto y_value = [&](double v) {
            if (!log_y) return v;
            return std::log10(std::max(v, min_pos));
        };
        double y_lo = std::numeric_limits<double>::infinity();
        double y_hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            y_lo = std::min(y_lo, y_value(series.mean[i] - series.std_dev[i]));
            y_hi = std::max(y_hi, y_value(series.mean[i] + series.std_dev[i]));
        }
        if (y_hi == y_lo) {
            y_hi += 1.0;
            y_lo -= 1.0;
        }

        const double plot_w = kWidth - kMarginLeft - kMarginRight;
        const double plot_h = kHeight - kMarginTop - kMarginBottom;
        auto px = [&](double x) { return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
        auto py = [&](double v) {
            return kMarginTop + (y_hi - y_value(v)) / (y_hi - y_lo) * plot_h;
        };

        // std band
        std::ostringstream band;
        for (std::size_t i = 0; i < n; ++i) {
            band << (i == 0 ? "M" : "L") << fmt(px(series.x[i])) << " "
                 << fmt(py(series.mean[i] + series.std_dev[i])) << " ";
        }
        for (std::size_t i = n; i-- > 0;) {
            band << "L" << fmt(px(series.x[i])) << " "
                 << fmt(py(series.mean[i] - series.std_dev[i])) << " ";
        }
        band << "Z";
        svg << "<path d=\"" << band.str() << "\" fill=\"#4477aa\" fill-opacity=\"0.2\" "
            << "stroke=\"none\"/>\n";

        std::ostringstream line;
        for (std::size_t i = 0; i < n; ++i) {
            line << fmt(px(series.x[i])) << "," << fmt(py(series.mean[i])) << " ";
        }
        svg << "<polyline points=\"" << line.str()
            << "\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\"/>\n";

        // axes
        svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
            << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kMarginLeft << "\" y=\"" << kHeight - 12
            << "\" font-size=\"12\">" << escape(x_label) << ": " << fmt(x_lo) << " .. "
            << fmt(x_hi) << "</text>\n";
        svg << "<text x=\"8\" y=\"" << kMarginTop - 8 << "\" font-size=\"12\">"
            << escape(y_label) << (log_y ? " (log10)" : "") << ": " << fmt(y_lo) << " .. "
            << fmt(y_hi) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mfg

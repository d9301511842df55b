#include "covo/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace covo::svg {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 2000;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
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

void render_chart(std::ostringstream& out, const Chart& chart, double y_offset) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -std::numeric_limits<double>::infinity();
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (const auto& s : chart.series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            if (y > 0.0 && std::isfinite(y)) {
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (!std::isfinite(x_min)) {
        x_min = 0.0;
        x_max = 1.0;
    }
    if (x_max <= x_min) x_max = x_min + 1.0;
    double lo_dec = std::isfinite(y_min) ? std::floor(std::log10(y_min)) : -1.0;
    double hi_dec = std::isfinite(y_max) ? std::ceil(std::log10(y_max)) : 0.0;
    if (hi_dec <= lo_dec) hi_dec = lo_dec + 1.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double y) {
        const double d = (y > 0.0 && std::isfinite(y)) ? std::clamp(std::log10(y), lo_dec, hi_dec)
                         : (std::isinf(y) && y > 0.0) ? hi_dec
                                                      : lo_dec;
        return y_offset + kTop + (hi_dec - d) / (hi_dec - lo_dec) * plot_h;
    };

    out << "<g class=\"chart\">\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(y_offset + 24) << "\" text-anchor=\"middle\" "
        << "font-size=\"16\">" << escape(chart.title) << "</text>\n";
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(y_offset + kTop) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    const int decades = static_cast<int>(hi_dec - lo_dec);
    const int step = std::max(1, decades / 8);
    for (int d = 0; d <= decades; d += step) {
        const double e = lo_dec + d;
        const double y = py(std::pow(10.0, e));
        out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft + plot_w)
            << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\" "
            << "font-size=\"11\">1e" << static_cast<int>(e) << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 4.0;
        out << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y_offset + kTop + plot_h + 16)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << num(xv) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(y_offset + kHeight - 10)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(chart.x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(y_offset + kTop + plot_h / 2) << "\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << num(y_offset + kTop + plot_h / 2) << ")\" text-anchor=\"middle\">"
        << escape(chart.y_label) << "</text>\n";

    for (std::size_t s = 0; s < chart.series.size(); ++s) {
        const auto& series = chart.series[s];
        const char* color = kPalette[s % kPalette.size()];
        const std::size_t stride = std::max<std::size_t>(1, (series.points.size() + kMaxPoints - 1) / kMaxPoints);
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series.points.size(); ++i) {
            if (i % stride != 0 && i + 1 != series.points.size()) continue;
            const auto& [x, y] = series.points[i];
            out << num(px(x)) << ',' << num(py(y)) << ' ';
        }
        out << "\"/>\n";
        const double ly = y_offset + kTop + 14 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << num(kWidth - kRight + 36) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight + 42) << "\" y=\"" << num(ly) << "\" font-size=\"12\">"
            << escape(series.label) << "</text>\n";
    }
    out << "</g>\n";
}

}  // namespace

std::string render(const std::vector<Chart>& charts) {
    std::ostringstream out;
    const double total_h = kHeight * static_cast<double>(std::max<std::size_t>(1, charts.size()));
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(total_h)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(total_h) << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < charts.size(); ++i) {
        render_chart(out, charts[i], kHeight * static_cast<double>(i));
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace covo::svg

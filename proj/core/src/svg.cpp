#include "llb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "llb/errors.hpp"

namespace llb {

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 160.0, kTop = 50.0, kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finalize() {
        if (!(lo <= hi)) { lo = 0.0; hi = 1.0; }
        if (hi == lo) { lo -= 0.5; hi += 0.5; }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<PlotSeries>& series) {
    Range xr, yr;
    for (const PlotSeries& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.finalize();
    yr.finalize();

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw MissingData("write_svg_chart: cannot open " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth)
        << "\" height=\"" << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth)
        << " " << fmt(kHeight) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(kLeft) << "\" y=\"28\" font-family=\"monospace\" "
           "font-size=\"16\">" << title << "</text>\n";

    // Axes with min/max tick labels.
    out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kHeight - kBottom + 20)
        << "\" font-family=\"monospace\" font-size=\"11\">t=" << fmt(xr.lo) << "</text>\n";
    out << "<text x=\"" << fmt(kLeft + plot_w - 60) << "\" y=\""
        << fmt(kHeight - kBottom + 20)
        << "\" font-family=\"monospace\" font-size=\"11\">t=" << fmt(xr.hi) << "</text>\n";
    out << "<text x=\"4\" y=\"" << fmt(kTop + 10)
        << "\" font-family=\"monospace\" font-size=\"11\">" << fmt(yr.hi) << "</text>\n";
    out << "<text x=\"4\" y=\"" << fmt(kTop + plot_h)
        << "\" font-family=\"monospace\" font-size=\"11\">" << fmt(yr.lo) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const PlotSeries& s = series[i];
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (s.x.size() == 1) {
            out << "<circle cx=\"" << fmt(px(s.x[0])) << "\" cy=\"" << fmt(py(s.y[0]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        } else if (!s.x.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t j = 0; j < s.x.size(); ++j) {
                if (j) out << ' ';
                out << fmt(px(s.x[j])) << ',' << fmt(py(s.y[j]));
            }
            out << "\"/>\n";
        }
        const double ly = kTop + 16.0 + 18.0 * static_cast<double>(i);
        out << "<rect x=\"" << fmt(kWidth - kRight + 12) << "\" y=\"" << fmt(ly - 9)
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << fmt(kWidth - kRight + 30) << "\" y=\"" << fmt(ly + 1)
            << "\" font-family=\"monospace\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace llb

#pragma once

#include <string>
#include <vector>

namespace llb {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Writes a deterministic standalone SVG line chart (time on the abscissa).
/// Output is a pure function of the inputs: fixed canvas, fixed palette,
/// fixed number formatting.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<PlotSeries>& series);

}  // namespace llb

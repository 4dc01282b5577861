#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace convexeit {

struct HeatmapStyle {
    double clip_lo = 1e-8;
    double clip_hi = 1e2;
    std::string title;
    std::string x_label = "sigma_1";
    std::string y_label = "sigma_2";
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
};

/// Log-scale heatmap of a rows x cols grid (values[i * cols + k], i along x,
/// k along y) as a self-contained SVG document.
std::string render_log_heatmap(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                               const HeatmapStyle& style);

}  // namespace convexeit

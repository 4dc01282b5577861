#include "convexeit/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace convexeit {
namespace {

struct Rgb {
    double r, g, b;
};

// Viridis anchor points.
constexpr std::array<Rgb, 5> kRamp{{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

std::string color(double t)
{
    t = std::clamp(t, 0.0, 1.0) * static_cast<double>(kRamp.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(t), kRamp.size() - 2);
    const double f = t - static_cast<double>(i);
    const Rgb& a = kRamp[i];
    const Rgb& b = kRamp[i + 1];
    return fmt::format("#{:02x}{:02x}{:02x}", static_cast<int>(std::lround(a.r + f * (b.r - a.r))),
                       static_cast<int>(std::lround(a.g + f * (b.g - a.g))),
                       static_cast<int>(std::lround(a.b + f * (b.b - a.b))));
}

}  // namespace

std::string render_log_heatmap(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                               const HeatmapStyle& style)
{
    const double cell = std::max(1.0, 600.0 / static_cast<double>(std::max(rows, cols)));
    const double width = cell * static_cast<double>(rows);
    const double height = cell * static_cast<double>(cols);
    const double margin = 60.0;
    const double lo = std::log10(style.clip_lo);
    const double hi = std::log10(style.clip_hi);

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
        width + 2 * margin + 80, height + 2 * margin);
    svg += fmt::format("<text x=\"{}\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n", margin,
                       style.title);
    svg += "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < cols; ++k) {
            const double v = values[i * cols + k];
            const double t = v > 0.0 && std::isfinite(v) ? (std::log10(v) - lo) / (hi - lo) : (v > 0.0 ? 1.0 : 0.0);
            // y grows upward
            svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                               margin + cell * static_cast<double>(i),
                               margin + height - cell * static_cast<double>(k + 1), cell, cell, color(t));
        }
    }
    svg += "</g>\n";
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{} [{} .. {}]</text>\n",
                       margin, height + margin + 30, style.x_label, style.x_lo, style.x_hi);
    svg += fmt::format(
        "<text x=\"20\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 20 {})\">{} [{} .. "
        "{}]</text>\n",
        margin + height, margin + height, style.y_label, style.y_lo, style.y_hi);
    // color bar
    for (int s = 0; s < 50; ++s) {
        const double t = static_cast<double>(s) / 49.0;
        svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"20\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                           margin + width + 30, margin + height * (1.0 - (s + 1) / 50.0), height / 50.0 + 0.5,
                           color(t));
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">1e{}</text>\n",
                       margin + width + 55, margin + 10, hi);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">1e{}</text>\n",
                       margin + width + 55, margin + height, lo);
    svg += "</svg>\n";
    return svg;
}

}  // namespace convexeit

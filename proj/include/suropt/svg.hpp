#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "suropt/analysis.hpp"

namespace suropt {

/// Minimal static SVG renderings of the plot-data files. Consumers that want
/// real figures should plot the CSVs; these are quick-look images.
std::string svg_boxplot(const std::map<MachineId, BoxplotStats>& stats,
                        const std::string& title);

std::string svg_histogram(const Histogram& hist, const HdiInterval& hdi,
                          std::optional<double> observed, const std::string& title);

/// Grayscale heatmap of one response over a surface grid (row-major,
/// resolution x resolution).
std::string svg_heatmap(const std::vector<SurfacePoint>& grid, int resolution,
                        ResponseSelector response, const std::string& title,
                        const std::string& label_a, const std::string& label_b);

}  // namespace suropt

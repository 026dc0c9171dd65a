#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mcorr {

// Standalone SVG document: a labeled grid of grayscale cells, values clamped
// to [0,1], 0 rendered black and 1 white. Label vectors must match the matrix
// shape.
std::string render_heatmap_svg(const Eigen::MatrixXd& values,
                               const std::vector<std::string>& row_labels,
                               const std::vector<std::string>& col_labels,
                               const std::string& title = "");

}  // namespace mcorr

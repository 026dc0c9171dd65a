#include "mcorr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcorr/errors.hpp"

namespace mcorr {

std::string render_heatmap_svg(const Eigen::MatrixXd& values,
                               const std::vector<std::string>& row_labels,
                               const std::vector<std::string>& col_labels,
                               const std::string& title) {
    const int rows = static_cast<int>(values.rows());
    const int cols = static_cast<int>(values.cols());
    if (rows < 1 || cols < 1) throw InvalidInput("render_heatmap_svg: empty matrix");
    if (static_cast<int>(row_labels.size()) != rows ||
        static_cast<int>(col_labels.size()) != cols) {
        throw InvalidInput("render_heatmap_svg: label count mismatch");
    }

    const int cell = 36;
    const int left = 64;                       // room for row labels
    const int top = title.empty() ? 28 : 52;   // room for column labels (and title)
    const int width = left + cols * cell + 16;
    const int height = top + rows * cell + 16;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) {
        out << "  <text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    }
    for (int c = 0; c < cols; ++c) {
        out << "  <text x=\"" << left + c * cell + cell / 2 << "\" y=\"" << top - 8
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << col_labels[c] << "</text>\n";
    }
    for (int r = 0; r < rows; ++r) {
        out << "  <text x=\"" << left - 8 << "\" y=\"" << top + r * cell + cell / 2 + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << row_labels[r] << "</text>\n";
        for (int c = 0; c < cols; ++c) {
            const double v = std::clamp(values(r, c), 0.0, 1.0);
            const int gray = static_cast<int>(std::lround(255.0 * v));
            out << "  <rect x=\"" << left + c * cell << "\" y=\"" << top + r * cell
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << gray
                << "," << gray << "," << gray << ")\" stroke=\"#808080\" stroke-width=\"1\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace mcorr

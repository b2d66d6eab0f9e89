#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "fsem/matrix.hpp"

namespace fsem {

/// Fill colours, one per label value. Labels at or past the end are rejected.
const std::vector<std::string>& scatter_palette();

/// Standalone SVG scatter plot of a [N x 2] layout: one circle per row,
/// coloured by label, with axes, min/max tick labels and a legend.
/// `names` gives legend text per label value; missing entries print the number.
std::string render_scatter_svg(const Matrix& layout, const std::vector<std::size_t>& labels,
                               const std::vector<std::string>& names, const std::string& title);

void visualize(const Matrix& layout, const std::vector<std::size_t>& labels, const std::vector<std::string>& names,
               const std::string& title, const std::filesystem::path& path);

}  // namespace fsem

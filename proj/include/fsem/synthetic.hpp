#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsem/dataset.hpp"

namespace fsem {

/// Primitive kinds the renderer knows.
const std::vector<std::string>& primitive_kinds();
/// Default target-task kinds and the disjoint auxiliary kinds.
std::vector<std::string> default_target_kinds();
std::vector<std::string> default_auxiliary_kinds();

/// Procedural grayscale shapes. Each image draws a primitive of its
/// category with jittered centre, scale, rotation and brightness over a
/// constant background, plus Gaussian pixel noise, clamped to [0, 1].
struct SyntheticSpec {
    std::vector<std::string> kinds = default_target_kinds();
    std::size_t per_category = 150;
    std::size_t image_size = 32;
    double position_jitter = 3.0;   ///< max centre offset, pixels
    double scale_jitter = 0.2;      ///< relative size range +-
    double rotation_jitter = 20.0;  ///< degrees +-
    double intensity_jitter = 0.3;  ///< foreground brightness drawn from [1 - j, 1]
    double background = 0.1;
    double noise = 0.15;            ///< pixel noise standard deviation
    double clutter = 0.0;           ///< probability of one distractor stroke

    void validate() const;
};

/// Categories are named after their kinds and ordered lexicographically,
/// the same order load_dataset gives a directory tree.
LabeledDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace fsem

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fsem/dataset.hpp"

namespace fsem {

enum class ColorPolicy {
    luminance_average,  ///< colour images become one channel, (r + g + b) / 3
    passthrough,
};

struct LoadOptions {
    ColorPolicy color = ColorPolicy::luminance_average;
};

/// Reads a PGM/PPM file (P2, P3, P5, P6; maxval up to 65535) as
/// [H x W x C] floats scaled by 1/maxval.
Tensor<float> read_pnm(const std::filesystem::path& path);
/// Writes P5 (C = 1) or P6 (C = 3) quantized to the given maxval.
void write_pnm(const std::filesystem::path& path, const Tensor<float>& pixels, std::uint32_t maxval = 255);

/// Raw-tensor container:
///   "FSDT", u32 version, u32 sample-count,
///   per sample: u32 label, u32 H, u32 W, u32 C, f32 payload [H x W x C]
/// All little-endian. Source ids are not stored; readers assign
/// "<file>#<index>".
inline constexpr std::uint32_t kTensorContainerVersion = 1;

std::vector<ImageSample> read_tensor_container(const std::filesystem::path& path);
void write_tensor_container(const std::filesystem::path& path, const std::vector<ImageSample>& samples);

/// Class-per-subdirectory ingestion: <root>/<category>/<file>. Categories
/// are the subdirectory names in lexicographic order. Files ending in
/// .pgm/.ppm/.pnm hold one image; .fsdt files may hold several (their stored
/// labels are replaced by the directory's). Other files are ignored.
LabeledDataset load_dataset(const std::filesystem::path& root, const LoadOptions& options = {});

/// Writes <root>/<category>/samples.fsdt per category. Category names must be
/// in lexicographic order so load_dataset reproduces the labels.
void save_dataset(const std::filesystem::path& root, const LabeledDataset& ds);

}  // namespace fsem

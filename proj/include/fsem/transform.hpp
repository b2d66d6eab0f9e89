#pragma once

#include <cstddef>
#include <cstdint>

#include "fsem/dataset.hpp"

namespace fsem {

enum class BoundaryFill {
    edge,      ///< replicate the nearest border pixel
    constant,  ///< use AugmentParams::fill_value
};

/// Ranges for random affine augmentation. Rotation is drawn from
/// U(-rotation_deg, rotation_deg), shear from U(-shear, shear) and zoom
/// from U(zoom_min, zoom_max).
struct AugmentParams {
    double rotation_deg = 10.0;
    double shear = 0.1;
    double zoom_min = 0.9;
    double zoom_max = 1.1;
    std::uint64_t seed = 0;
    BoundaryFill fill = BoundaryFill::edge;
    float fill_value = 0.0f;

    void validate() const;
};

/// A concrete affine map about the image centre. Content is zoomed, then
/// sheared along x, then rotated; each output pixel samples the source at
/// the inverse-mapped position.
struct AffineTransform {
    double rotation_deg = 0.0;
    double shear = 0.0;
    double zoom = 1.0;
};

/// Bilinear resize with corner-aligned sampling (output corners land on
/// input corners). Values stay in [0, 1].
ImageSample resize(const ImageSample& img, std::size_t height, std::size_t width);

ImageSample affine_warp(const ImageSample& img, const AffineTransform& transform,
                        BoundaryFill fill = BoundaryFill::edge, float fill_value = 0.0f);

/// Draws one AffineTransform from params (seeded by params.seed) and
/// applies it. Label and shape are unchanged.
ImageSample augment(const ImageSample& img, const AugmentParams& params);

/// Stretches the image to span [0, 1]; constant images are returned as is.
ImageSample normalize_range(const ImageSample& img);

/// Appends round(fraction * N) augmented copies of seeded, per-category
/// uniform picks. Per-category appended counts are allocated by largest
/// remainder so each is within 1 of fraction * N_c.
LabeledDataset expand_dataset(const LabeledDataset& ds, double fraction, const AugmentParams& params);

}  // namespace fsem

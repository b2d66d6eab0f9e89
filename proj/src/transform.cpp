#include "fsem/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fsem/rng.hpp"

namespace fsem {

namespace {

// sin/cos of an angle in degrees, exact at multiples of 90 so quarter turns
// map the pixel lattice onto itself.
std::pair<double, double> sincos_degrees(double degrees) {
    const double quarter = std::round(degrees / 90.0);
    const double rest = degrees - 90.0 * quarter;
    double s = 0.0, c = 1.0;
    if (rest != 0.0) {
        const double r = rest * std::numbers::pi / 180.0;
        s = std::sin(r);
        c = std::cos(r);
    }
    switch (((static_cast<long long>(quarter) % 4) + 4) % 4) {
        case 1: return {c, -s};
        case 2: return {-s, -c};
        case 3: return {-c, s};
        default: return {s, c};
    }
}

float lerp(float a, float b, double t) { return static_cast<float>(a + t * (static_cast<double>(b) - a)); }

// Bilinear sample at (y, x) of channel ch; coordinates already inside the
// image.
float bilinear(const Tensor<float>& px, double y, double x, std::size_t ch) {
    const std::size_t h = px.dim(0), w = px.dim(1), c = px.dim(2);
    const auto y0 = static_cast<std::size_t>(std::floor(y));
    const auto x0 = static_cast<std::size_t>(std::floor(x));
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const std::size_t x1 = std::min(x0 + 1, w - 1);
    const double fy = y - static_cast<double>(y0);
    const double fx = x - static_cast<double>(x0);
    auto at = [&](std::size_t yy, std::size_t xx) { return px[(yy * w + xx) * c + ch]; };
    const float top = fx == 0.0 ? at(y0, x0) : lerp(at(y0, x0), at(y0, x1), fx);
    if (fy == 0.0) return top;
    const float bottom = fx == 0.0 ? at(y1, x0) : lerp(at(y1, x0), at(y1, x1), fx);
    return lerp(top, bottom, fy);
}

}  // namespace

void AugmentParams::validate() const {
    if (!(rotation_deg >= 0.0)) throw std::invalid_argument("augment: rotation range must be >= 0");
    if (!(shear >= 0.0)) throw std::invalid_argument("augment: shear range must be >= 0");
    if (!(zoom_min > 0.0 && zoom_max >= zoom_min)) {
        throw std::invalid_argument("augment: zoom interval must be positive and ordered");
    }
}

ImageSample resize(const ImageSample& img, std::size_t height, std::size_t width) {
    if (height == 0 || width == 0) throw std::invalid_argument("resize: target dimensions must be >= 1");
    const std::size_t h = img.height(), w = img.width(), c = img.channels();
    ImageSample out{Tensor<float>({height, width, c}), img.label, img.source_id};
    auto source_coord = [](std::size_t i, std::size_t dst, std::size_t src) {
        if (dst == 1) return static_cast<double>(src - 1) / 2.0;
        return static_cast<double>(i) * static_cast<double>(src - 1) / static_cast<double>(dst - 1);
    };
    for (std::size_t y = 0; y < height; ++y) {
        const double sy = std::min(source_coord(y, height, h), static_cast<double>(h - 1));
        for (std::size_t x = 0; x < width; ++x) {
            const double sx = std::min(source_coord(x, width, w), static_cast<double>(w - 1));
            for (std::size_t ch = 0; ch < c; ++ch) {
                out.pixels[(y * width + x) * c + ch] = std::clamp(bilinear(img.pixels, sy, sx, ch), 0.0f, 1.0f);
            }
        }
    }
    return out;
}

ImageSample affine_warp(const ImageSample& img, const AffineTransform& t, BoundaryFill fill, float fill_value) {
    if (!(t.zoom > 0.0)) throw std::invalid_argument("affine_warp: zoom must be positive");
    const std::size_t h = img.height(), w = img.width(), c = img.channels();
    const auto [s, co] = sincos_degrees(t.rotation_deg);
    // Inverse map: Z^-1 * Shear^-1 * R^-1 applied to centred output coords.
    const double inv_zoom = 1.0 / t.zoom;
    const double a00 = (co + t.shear * s) * inv_zoom;
    const double a01 = (s - t.shear * co) * inv_zoom;
    const double a10 = -s * inv_zoom;
    const double a11 = co * inv_zoom;
    const double cy = (static_cast<double>(h) - 1.0) / 2.0;
    const double cx = (static_cast<double>(w) - 1.0) / 2.0;
    const double max_y = static_cast<double>(h - 1), max_x = static_cast<double>(w - 1);

    ImageSample out{Tensor<float>(img.pixels.shape()), img.label, img.source_id};
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double u = static_cast<double>(x) - cx;
            const double v = static_cast<double>(y) - cy;
            double sx = a00 * u + a01 * v + cx;
            double sy = a10 * u + a11 * v + cy;
            const bool outside = sx < 0.0 || sy < 0.0 || sx > max_x || sy > max_y;
            for (std::size_t ch = 0; ch < c; ++ch) {
                float value;
                if (outside && fill == BoundaryFill::constant) {
                    value = fill_value;
                } else {
                    value = bilinear(img.pixels, std::clamp(sy, 0.0, max_y), std::clamp(sx, 0.0, max_x), ch);
                }
                out.pixels[(y * w + x) * c + ch] = std::clamp(value, 0.0f, 1.0f);
            }
        }
    }
    return out;
}

ImageSample augment(const ImageSample& img, const AugmentParams& params) {
    params.validate();
    Rng rng(params.seed);
    AffineTransform t;
    t.rotation_deg = rng.uniform(-params.rotation_deg, params.rotation_deg);
    t.shear = rng.uniform(-params.shear, params.shear);
    t.zoom = rng.uniform(params.zoom_min, params.zoom_max);
    return affine_warp(img, t, params.fill, params.fill_value);
}

ImageSample normalize_range(const ImageSample& img) {
    const auto [lo, hi] = std::minmax_element(img.pixels.values().begin(), img.pixels.values().end());
    const float min = *lo, max = *hi;
    if (!(max > min)) return img;
    ImageSample out = img;
    for (float& v : out.pixels.values()) v = std::clamp((v - min) / (max - min), 0.0f, 1.0f);
    return out;
}

LabeledDataset expand_dataset(const LabeledDataset& ds, double fraction, const AugmentParams& params) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("expand_dataset: fraction outside [0, 1]");
    params.validate();
    const std::size_t total = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.size())));
    LabeledDataset out = ds;
    if (total == 0) return out;

    const std::size_t categories = ds.category_count();
    const auto counts = ds.category_counts();
    std::vector<std::size_t> quota(categories);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < categories; ++c) {
        const double exact = fraction * static_cast<double>(counts[c]);
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += quota[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        const std::size_t c = remainders[k % categories].second;
        if (counts[c] > 0) ++quota[c];
        else --assigned;
    }

    std::size_t appended = 0;
    for (std::size_t c = 0; c < categories; ++c) {
        if (quota[c] == 0) continue;
        std::vector<std::size_t> members = ds.members(c);
        Rng rng(mix_seed(params.seed, c));
        std::vector<std::size_t> picks;
        if (quota[c] <= members.size()) {
            rng.shuffle(std::span<std::size_t>(members));
            picks.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
        } else {
            for (std::size_t k = 0; k < quota[c]; ++k) picks.push_back(members[rng.below(members.size())]);
        }
        for (std::size_t source : picks) {
            AugmentParams draw = params;
            draw.seed = mix_seed(params.seed ^ 0xa5a5a5a5ULL, appended);
            ImageSample copy = augment(ds.samples[source], draw);
            copy.source_id = ds.samples[source].source_id + "#aug" + std::to_string(appended);
            out.samples.push_back(std::move(copy));
            ++appended;
        }
    }
    return out;
}

}  // namespace fsem

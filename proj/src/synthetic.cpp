#include "fsem/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsem/rng.hpp"

namespace fsem {

namespace {

// Unit-radius shapes in local coordinates.
using Inside = bool (*)(double x, double y);

struct Primitive {
    const char* name;
    Inside inside;
};

const Primitive kPrimitives[] = {
    {"bar", [](double x, double y) { return std::abs(x) <= 1.0 && std::abs(y) <= 0.3; }},
    {"cross",
     [](double x, double y) {
         const double ax = std::abs(x), ay = std::abs(y);
         return (ax <= 0.25 && ay <= 1.0) || (ay <= 0.25 && ax <= 1.0);
     }},
    {"diamond", [](double x, double y) { return std::abs(x) + std::abs(y) <= 1.0; }},
    {"disk", [](double x, double y) { return x * x + y * y <= 1.0; }},
    {"frame",
     [](double x, double y) {
         const double m = std::max(std::abs(x), std::abs(y));
         return m >= 0.5 && m <= 0.85;
     }},
    {"ring",
     [](double x, double y) {
         const double r2 = x * x + y * y;
         return r2 >= 0.36 && r2 <= 1.0;
     }},
    {"square", [](double x, double y) { return std::max(std::abs(x), std::abs(y)) <= 0.8; }},
    {"triangle", [](double x, double y) { return y <= 0.7 && std::abs(x) <= 0.9 * (y + 1.0) / 1.7; }},
};

Inside find_primitive(const std::string& name) {
    for (const Primitive& p : kPrimitives) {
        if (name == p.name) return p.inside;
    }
    throw std::invalid_argument("generate_synthetic: unknown primitive '" + name + "'");
}

constexpr int kSuper = 3;  // supersamples per axis
constexpr double kBaseRadius = 0.3;  // fraction of the image side

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    const double t = len2 > 0 ? std::clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0) : 0.0;
    const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

ImageSample render(Inside inside, const SyntheticSpec& spec, Rng& rng, std::size_t label, std::string id) {
    const std::size_t n = spec.image_size;
    const double centre = (static_cast<double>(n) - 1.0) / 2.0;
    const double cx = centre + rng.uniform(-spec.position_jitter, spec.position_jitter);
    const double cy = centre + rng.uniform(-spec.position_jitter, spec.position_jitter);
    const double radius =
        kBaseRadius * static_cast<double>(n) * (1.0 + rng.uniform(-spec.scale_jitter, spec.scale_jitter));
    const double angle = rng.uniform(-spec.rotation_jitter, spec.rotation_jitter) * std::numbers::pi / 180.0;
    const double brightness = 1.0 - rng.uniform(0.0, spec.intensity_jitter);
    const double cs = std::cos(angle), sn = std::sin(angle);

    const bool clutter = spec.clutter > 0.0 && rng.uniform() < spec.clutter;
    double ax = 0, ay = 0, bx = 0, by = 0;
    if (clutter) {
        const double side = static_cast<double>(n - 1);
        ax = rng.uniform(0.0, side);
        ay = rng.uniform(0.0, side);
        bx = rng.uniform(0.0, side);
        by = rng.uniform(0.0, side);
    }

    Tensor<float> px({n, n, 1});
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
            int hits = 0;
            for (int sy = 0; sy < kSuper; ++sy) {
                for (int sx = 0; sx < kSuper; ++sx) {
                    const double fx = static_cast<double>(x) + (sx + 0.5) / kSuper - 0.5 - cx;
                    const double fy = static_cast<double>(y) + (sy + 0.5) / kSuper - 0.5 - cy;
                    const double lx = (cs * fx + sn * fy) / radius;
                    const double ly = (-sn * fx + cs * fy) / radius;
                    hits += inside(lx, ly) ? 1 : 0;
                }
            }
            double v = spec.background + (brightness - spec.background) * hits / double(kSuper * kSuper);
            if (clutter && segment_distance(double(x), double(y), ax, ay, bx, by) <= 0.7) {
                v = std::max(v, brightness);
            }
            if (spec.noise > 0.0) v += rng.normal(0.0, spec.noise);
            px[y * n + x] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
    }
    return {std::move(px), label, std::move(id)};
}

}  // namespace

const std::vector<std::string>& primitive_kinds() {
    static const std::vector<std::string> kinds = [] {
        std::vector<std::string> out;
        for (const Primitive& p : kPrimitives) out.emplace_back(p.name);
        return out;
    }();
    return kinds;
}

std::vector<std::string> default_target_kinds() { return {"cross", "disk", "ring"}; }
std::vector<std::string> default_auxiliary_kinds() { return {"bar", "diamond", "frame", "square", "triangle"}; }

void SyntheticSpec::validate() const {
    if (kinds.size() < 2) throw std::invalid_argument("synthetic: need at least 2 categories");
    if (per_category < 6) throw std::invalid_argument("synthetic: need at least 6 samples per category");
    if (image_size < 4) throw std::invalid_argument("synthetic: image size must be >= 4");
    std::vector<std::string> sorted = kinds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("synthetic: duplicate primitive kind");
    }
    for (const std::string& k : kinds) find_primitive(k);
    const bool ok = position_jitter >= 0 && scale_jitter >= 0 && scale_jitter < 1 && rotation_jitter >= 0 &&
                    intensity_jitter >= 0 && intensity_jitter < 1 && background >= 0 && background < 1 &&
                    noise >= 0 && clutter >= 0 && clutter <= 1;
    if (!ok) throw std::invalid_argument("synthetic: jitter, noise or background parameter out of range");
}

LabeledDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    LabeledDataset ds;
    ds.category_names = spec.kinds;
    std::sort(ds.category_names.begin(), ds.category_names.end());
    for (std::size_t c = 0; c < ds.category_names.size(); ++c) {
        const std::string& kind = ds.category_names[c];
        const Inside inside = find_primitive(kind);
        Rng rng(mix_seed(seed, c));
        for (std::size_t k = 0; k < spec.per_category; ++k) {
            ds.samples.push_back(render(inside, spec, rng, c, "synthetic/" + kind + "/" + std::to_string(k)));
        }
    }
    return ds;
}

}  // namespace fsem

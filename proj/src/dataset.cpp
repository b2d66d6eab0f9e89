#include "fsem/dataset.hpp"

#include <numeric>
#include <stdexcept>

namespace fsem {

std::vector<std::size_t> LabeledDataset::labels() const {
    std::vector<std::size_t> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.label);
    return out;
}

std::vector<std::size_t> LabeledDataset::category_counts() const {
    std::vector<std::size_t> counts(category_names.size(), 0);
    for (const auto& s : samples) {
        if (s.label < counts.size()) ++counts[s.label];
    }
    return counts;
}

std::vector<std::size_t> LabeledDataset::members(std::size_t category) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].label == category) out.push_back(i);
    }
    return out;
}

void LabeledDataset::validate() const {
    if (category_names.size() < 2) {
        throw std::invalid_argument("dataset needs at least 2 categories, has " + std::to_string(category_names.size()));
    }
    for (const auto& s : samples) {
        if (s.label >= category_names.size()) {
            throw std::invalid_argument("sample " + s.source_id + " has label " + std::to_string(s.label) +
                                        " outside " + std::to_string(category_names.size()) + " categories");
        }
        if (s.pixels.rank() != 3) throw std::invalid_argument("sample " + s.source_id + " is not [H x W x C]");
        for (float v : s.pixels.values()) {
            if (!(v >= 0.0f && v <= 1.0f)) {
                throw std::invalid_argument("sample " + s.source_id + " has a pixel outside [0, 1]");
            }
        }
    }
    const auto counts = category_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) throw std::invalid_argument("category '" + category_names[c] + "' has no samples");
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.category_names = category_names;
    out.samples.reserve(indices.size());
    for (std::size_t i : indices) out.samples.push_back(samples.at(i));
    return out;
}

Tensor<float> to_batch(const LabeledDataset& ds, std::span<const std::size_t> indices) {
    if (indices.empty()) throw std::invalid_argument("to_batch: no samples");
    const ImageSample& first = ds.samples.at(indices[0]);
    const std::size_t h = first.height(), w = first.width(), c = first.channels();
    Tensor<float> batch({indices.size(), c, h, w});
    float* out = batch.data();
    for (std::size_t i : indices) {
        const ImageSample& s = ds.samples.at(i);
        if (s.pixels.shape() != first.pixels.shape()) {
            throw std::invalid_argument("to_batch: sample " + s.source_id + " has shape " +
                                        shape_to_string(s.pixels.shape()) + ", expected " +
                                        shape_to_string(first.pixels.shape()));
        }
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) *out++ = s.pixels[(y * w + x) * c + ch];
            }
        }
    }
    return batch;
}

Tensor<float> to_batch(const LabeledDataset& ds) {
    std::vector<std::size_t> all(ds.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return to_batch(ds, all);
}

}  // namespace fsem

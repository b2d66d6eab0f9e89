#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fsem/tensor.hpp"

namespace fsem {

/// One image with pixel values in [0, 1], stored [height x width x channels].
struct ImageSample {
    Tensor<float> pixels;
    std::size_t label = 0;
    std::string source_id;

    std::size_t height() const { return pixels.dim(0); }
    std::size_t width() const { return pixels.dim(1); }
    std::size_t channels() const { return pixels.dim(2); }

    bool operator==(const ImageSample&) const = default;
};

struct LabeledDataset {
    std::vector<ImageSample> samples;
    std::vector<std::string> category_names;

    std::size_t size() const { return samples.size(); }
    std::size_t category_count() const { return category_names.size(); }
    std::vector<std::size_t> labels() const;
    std::vector<std::size_t> category_counts() const;
    /// Indices of the samples labelled `category`, in dataset order.
    std::vector<std::size_t> members(std::size_t category) const;

    /// Throws std::invalid_argument unless there are >= 2 categories, every
    /// category has a sample, every label is in range and pixels lie in [0,1].
    void validate() const;

    LabeledDataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const LabeledDataset&) const = default;
};

/// Stratified train/validation/test partition, as index lists into parent.
struct SplitDataset {
    std::shared_ptr<const LabeledDataset> parent;
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;

    LabeledDataset train_set() const { return parent->subset(train); }
    LabeledDataset validation_set() const { return parent->subset(validation); }
    LabeledDataset test_set() const { return parent->subset(test); }
};

struct SamplePair {
    std::size_t first = 0;
    std::size_t second = 0;
    bool same = false;

    bool operator==(const SamplePair&) const = default;
};

struct PairBatch {
    std::vector<SamplePair> pairs;
};

/// Stacks the given samples into a network batch [n x C x H x W].
/// All samples must share one shape.
Tensor<float> to_batch(const LabeledDataset& ds, std::span<const std::size_t> indices);
Tensor<float> to_batch(const LabeledDataset& ds);

}  // namespace fsem

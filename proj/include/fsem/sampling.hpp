#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>

#include "fsem/dataset.hpp"

namespace fsem {

struct SplitRatios {
    double train = 0.6;
    double validation = 0.2;
    double test = 0.2;
};

/// Stratified, seeded split. Each category is shuffled by its own generator
/// (derived from seed and category index) and cut into round(train * n),
/// round(validation * n) and the remainder. Index lists are sorted.
/// Throws when ratios are not positive or do not sum to 1, or when a
/// category cannot place at least one sample in every part.
SplitDataset split(std::shared_ptr<const LabeledDataset> ds, const SplitRatios& ratios, std::uint64_t seed);

/// round(count * positive_ratio) same-category pairs, the rest
/// cross-category; each drawn uniformly over its pair type, then shuffled.
PairBatch sample_pairs(const LabeledDataset& ds, std::size_t count, double positive_ratio, std::uint64_t seed);

}  // namespace fsem

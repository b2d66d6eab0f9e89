#include "fsem/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fsem/rng.hpp"

namespace fsem {

namespace {

// Index i such that cumulative[i - 1] <= r < cumulative[i].
std::size_t pick_weighted(const std::vector<std::size_t>& cumulative, Rng& rng) {
    const std::size_t r = rng.below(cumulative.back());
    return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
}

}  // namespace

SplitDataset split(std::shared_ptr<const LabeledDataset> ds, const SplitRatios& ratios, std::uint64_t seed) {
    if (!ds) throw std::invalid_argument("split: null dataset");
    if (!(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0)) {
        throw std::invalid_argument("split: ratios must be positive");
    }
    if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
        throw std::invalid_argument("split: ratios must sum to 1");
    }

    SplitDataset out;
    out.parent = ds;
    std::string too_small;
    for (std::size_t c = 0; c < ds->category_count(); ++c) {
        std::vector<std::size_t> members = ds->members(c);
        const std::size_t n = members.size();
        const auto n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
        const auto n_val = static_cast<std::size_t>(std::llround(ratios.validation * static_cast<double>(n)));
        if (n < 3 || n_train == 0 || n_val == 0 || n_train + n_val >= n) {
            too_small += (too_small.empty() ? "" : ", ") + ds->category_names[c] + " (" + std::to_string(n) + ")";
            continue;
        }
        Rng rng(mix_seed(seed, c));
        rng.shuffle(std::span<std::size_t>(members));
        out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.validation.insert(out.validation.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                              members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
        out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), members.end());
    }
    if (!too_small.empty()) {
        throw std::invalid_argument("split: categories too small to appear in every split: " + too_small);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.validation.begin(), out.validation.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

PairBatch sample_pairs(const LabeledDataset& ds, std::size_t count, double positive_ratio, std::uint64_t seed) {
    if (!(positive_ratio > 0.0 && positive_ratio < 1.0)) {
        throw std::invalid_argument("sample_pairs: positive ratio must lie strictly between 0 and 1");
    }
    const std::size_t categories = ds.category_count();
    std::vector<std::vector<std::size_t>> members(categories);
    for (std::size_t c = 0; c < categories; ++c) members[c] = ds.members(c);

    const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(count) * positive_ratio));
    const std::size_t n_neg = count - n_pos;

    // Ordered-pair counts per category drive uniform sampling per pair type.
    std::vector<std::size_t> pos_cum, neg_cum;
    std::size_t pos_total = 0, neg_total = 0;
    std::size_t populated = 0;
    for (std::size_t c = 0; c < categories; ++c) {
        const std::size_t n = members[c].size();
        if (n > 0) ++populated;
        pos_total += n > 1 ? n * (n - 1) : 0;
        neg_total += n * (ds.size() - n);
        pos_cum.push_back(pos_total);
        neg_cum.push_back(neg_total);
    }
    if (n_pos > 0 && pos_total == 0) {
        throw std::invalid_argument("sample_pairs: no category has two samples, positive pairs are impossible");
    }
    if (n_neg > 0 && (populated < 2 || neg_total == 0)) {
        throw std::invalid_argument("sample_pairs: only one populated category, negative pairs are impossible");
    }
    for (std::size_t c = 0; c < categories; ++c) {
        if (members[c].size() < 2) {
            throw std::invalid_argument("sample_pairs: category '" + ds.category_names[c] + "' has fewer than 2 samples");
        }
    }

    Rng rng(seed);
    PairBatch batch;
    batch.pairs.reserve(count);
    for (std::size_t k = 0; k < n_pos; ++k) {
        const auto& group = members[pick_weighted(pos_cum, rng)];
        const std::size_t a = rng.below(group.size());
        std::size_t b = rng.below(group.size() - 1);
        if (b >= a) ++b;
        batch.pairs.push_back({group[a], group[b], true});
    }
    for (std::size_t k = 0; k < n_neg; ++k) {
        const std::size_t c = pick_weighted(neg_cum, rng);
        const std::size_t a = members[c][rng.below(members[c].size())];
        // b uniform over the samples outside category c.
        std::size_t r = rng.below(ds.size() - members[c].size());
        std::size_t b = 0;
        for (std::size_t other = 0; other < categories; ++other) {
            if (other == c) continue;
            if (r < members[other].size()) {
                b = members[other][r];
                break;
            }
            r -= members[other].size();
        }
        batch.pairs.push_back({a, b, false});
    }
    rng.shuffle(std::span<SamplePair>(batch.pairs));
    return batch;
}

}  // namespace fsem

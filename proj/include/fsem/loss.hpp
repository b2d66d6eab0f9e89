#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsem/tensor.hpp"

namespace fsem {

template <typename T>
struct LossValue {
    T loss{};
    Tensor<T> grad;  ///< d loss / d input, same shape as the input
};

template <typename T>
struct PairLossValue {
    T loss{};
    Tensor<T> grad_first;
    Tensor<T> grad_second;
};

/// Mean over the batch of -log softmax(logits)[label].
/// logits: [batch x classes], classes >= 2.
template <typename T>
LossValue<T> cross_entropy(const Tensor<T>& logits, std::span<const std::size_t> labels);

/// Mean over the batch of -log(probabilities[label]); used when the network
/// itself ends in a softmax layer.
template <typename T>
LossValue<T> negative_log_likelihood(const Tensor<T>& probabilities, std::span<const std::size_t> labels);

/// Contrastive pair loss, averaged over rows:
///   same:      d^2
///   different: max(0, margin - d)^2
/// with d the Euclidean distance between matching rows of first and second.
/// A single pair may be passed as two vectors of rank 1.
template <typename T>
PairLossValue<T> contrastive_loss(const Tensor<T>& first, const Tensor<T>& second, const std::vector<bool>& same,
                                  T margin = T{1});

}  // namespace fsem

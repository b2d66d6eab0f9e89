#include "fsem/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fsem/layers.hpp"

namespace fsem {

namespace {

template <typename T>
void check_labels(const Tensor<T>& scores, std::span<const std::size_t> labels, const char* who) {
    if (scores.rank() != 2) throw std::invalid_argument(std::string(who) + ": expected [batch x classes]");
    if (labels.empty() || scores.dim(0) == 0) throw std::invalid_argument(std::string(who) + ": empty batch");
    if (labels.size() != scores.dim(0)) {
        throw std::invalid_argument(std::string(who) + ": " + std::to_string(labels.size()) + " labels for batch of " +
                                    std::to_string(scores.dim(0)));
    }
    if (scores.dim(1) < 2) throw std::invalid_argument(std::string(who) + ": need at least 2 classes");
    for (std::size_t label : labels) {
        if (label >= scores.dim(1)) {
            throw std::out_of_range(std::string(who) + ": label " + std::to_string(label) + " out of range for " +
                                    std::to_string(scores.dim(1)) + " classes");
        }
    }
}

}  // namespace

template <typename T>
LossValue<T> cross_entropy(const Tensor<T>& logits, std::span<const std::size_t> labels) {
    check_labels(logits, labels, "cross_entropy");
    const std::size_t batch = logits.dim(0), classes = logits.dim(1);
    LossValue<T> out{T{0}, softmax(logits)};
    // log-softmax computed directly so saturated logits stay finite.
    for (std::size_t r = 0; r < batch; ++r) {
        T peak = logits.at(r, 0);
        for (std::size_t c = 1; c < classes; ++c) peak = std::max(peak, logits.at(r, c));
        T total{0};
        for (std::size_t c = 0; c < classes; ++c) total += std::exp(logits.at(r, c) - peak);
        out.loss += std::log(total) - (logits.at(r, labels[r]) - peak);
    }
    const T scale = T{1} / static_cast<T>(batch);
    out.loss *= scale;
    for (std::size_t r = 0; r < batch; ++r) {
        out.grad.at(r, labels[r]) -= T{1};
        for (std::size_t c = 0; c < classes; ++c) out.grad.at(r, c) *= scale;
    }
    return out;
}

template <typename T>
LossValue<T> negative_log_likelihood(const Tensor<T>& probabilities, std::span<const std::size_t> labels) {
    check_labels(probabilities, labels, "negative_log_likelihood");
    const std::size_t batch = probabilities.dim(0);
    LossValue<T> out{T{0}, Tensor<T>(probabilities.shape())};
    const T scale = T{1} / static_cast<T>(batch);
    for (std::size_t r = 0; r < batch; ++r) {
        const T p = probabilities.at(r, labels[r]);
        out.loss -= std::log(p) * scale;
        out.grad.at(r, labels[r]) = -scale / p;
    }
    return out;
}

template <typename T>
PairLossValue<T> contrastive_loss(const Tensor<T>& first, const Tensor<T>& second, const std::vector<bool>& same,
                                  T margin) {
    if (first.shape() != second.shape()) {
        throw std::invalid_argument("contrastive_loss: shape mismatch " + shape_to_string(first.shape()) + " vs " +
                                    shape_to_string(second.shape()));
    }
    if (!(margin > T{0})) throw std::invalid_argument("contrastive_loss: margin must be positive");
    const std::size_t rows = first.rank() == 1 ? 1 : first.dim(0);
    if (same.size() != rows) {
        throw std::invalid_argument("contrastive_loss: " + std::to_string(same.size()) + " flags for " +
                                    std::to_string(rows) + " pairs");
    }
    const std::size_t width = first.size() / rows;
    PairLossValue<T> out{T{0}, Tensor<T>(first.shape()), Tensor<T>(first.shape())};
    const T scale = T{1} / static_cast<T>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const T* a = first.data() + r * width;
        const T* b = second.data() + r * width;
        T sq{0};
        for (std::size_t k = 0; k < width; ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
        T coeff{0};  // d loss / d a = coeff * (a - b)
        if (same[r]) {
            out.loss += sq * scale;
            coeff = T{2};
        } else {
            const T d = std::sqrt(sq);
            if (d < margin) {
                out.loss += (margin - d) * (margin - d) * scale;
                // At d == 0 the direction is undefined; the subgradient 0 is used.
                coeff = d > T{0} ? T{-2} * (margin - d) / d : T{0};
            }
        }
        for (std::size_t k = 0; k < width; ++k) {
            const T g = coeff * (a[k] - b[k]) * scale;
            out.grad_first[r * width + k] = g;
            out.grad_second[r * width + k] = -g;
        }
    }
    return out;
}

template LossValue<float> cross_entropy(const Tensor<float>&, std::span<const std::size_t>);
template LossValue<double> cross_entropy(const Tensor<double>&, std::span<const std::size_t>);
template LossValue<float> negative_log_likelihood(const Tensor<float>&, std::span<const std::size_t>);
template LossValue<double> negative_log_likelihood(const Tensor<double>&, std::span<const std::size_t>);
template PairLossValue<float> contrastive_loss(const Tensor<float>&, const Tensor<float>&, const std::vector<bool>&, float);
template PairLossValue<double> contrastive_loss(const Tensor<double>&, const Tensor<double>&, const std::vector<bool>&,
                                                double);

}  // namespace fsem

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fsem/rng.hpp"
#include "fsem/tensor.hpp"

namespace fsem {

enum class LayerKind : std::uint32_t {
    convolution = 0,
    linear = 1,
    relu = 2,
    sigmoid = 3,
    softmax = 4,
    max_pool = 5,
    flatten = 6,
};

std::string_view to_string(LayerKind kind);

/// Integer hyperparameters that fully describe a layer's structure.
/// convolution: {in_channels, out_channels, kernel, stride, padding}
/// linear:      {in_features, out_features}
/// max_pool:    {window, stride}
/// others:      {}
using LayerConfig = std::vector<std::uint32_t>;

/// One stage of a sequential network. Tensors passed to forward/backward
/// carry a leading batch dimension; shapes reported by output_shape do not.
template <typename T>
class Layer {
public:
    virtual ~Layer() = default;

    virtual LayerKind kind() const = 0;
    virtual LayerConfig config() const { return {}; }
    virtual std::string describe() const;

    /// Per-sample output shape; throws std::invalid_argument when the
    /// per-sample input shape is not accepted.
    virtual Shape output_shape(const Shape& input) const = 0;

    /// Forward pass that keeps whatever backward() needs.
    virtual Tensor<T> forward(const Tensor<T>& input) = 0;
    /// Forward pass without touching the cache.
    virtual Tensor<T> infer(const Tensor<T>& input) const = 0;
    /// Returns the gradient with respect to the cached input. Parameter
    /// gradients are accumulated only when accumulate is true.
    virtual Tensor<T> backward(const Tensor<T>& grad_output, bool accumulate) = 0;

    virtual void clear_cache() = 0;

    virtual std::vector<Tensor<T>*> parameters() { return {}; }
    virtual std::vector<const Tensor<T>*> parameters() const { return {}; }
    virtual std::vector<Tensor<T>*> gradients() { return {}; }

    /// Fan-in scaled uniform initialization: U(-sqrt(3 gain / fan_in), +...).
    virtual void initialize(Rng& /*rng*/, double /*gain*/) {}

    virtual std::unique_ptr<Layer> clone() const = 0;
};

template <typename T>
std::unique_ptr<Layer<T>> make_layer(LayerKind kind, const LayerConfig& config);

template <typename T>
std::unique_ptr<Layer<T>> make_convolution(std::size_t in_channels, std::size_t out_channels,
                                           std::size_t kernel, std::size_t stride = 1,
                                           std::size_t padding = 0);
template <typename T>
std::unique_ptr<Layer<T>> make_linear(std::size_t in_features, std::size_t out_features);
template <typename T>
std::unique_ptr<Layer<T>> make_max_pool(std::size_t window, std::size_t stride = 0);
template <typename T>
std::unique_ptr<Layer<T>> make_relu();
template <typename T>
std::unique_ptr<Layer<T>> make_sigmoid();
template <typename T>
std::unique_ptr<Layer<T>> make_softmax();
template <typename T>
std::unique_ptr<Layer<T>> make_flatten();

/// Row-wise softmax of a [batch x features] tensor (max-shifted).
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits);

}  // namespace fsem

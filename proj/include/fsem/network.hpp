#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "fsem/layers.hpp"
#include "fsem/tensor.hpp"

namespace fsem {

/// Ordered chain of layers with a per-layer frozen mask.
///
/// forward() caches what backward() needs; backward() consumes that cache
/// and accumulates parameter gradients for every non-frozen layer it passes
/// through. Frozen layers still propagate input gradients. infer() is const
/// and leaves the cache alone, so a trained network can be shared.
template <typename T>
class Network {
public:
    Network() = default;
    explicit Network(Shape input_shape) : input_shape_(std::move(input_shape)) {}

    Network(const Network& other);
    Network& operator=(const Network& other);
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    /// Appends a layer; throws std::invalid_argument naming both layers when
    /// the new layer cannot accept the current output shape.
    Network& add(std::unique_ptr<Layer<T>> layer, bool frozen = false);

    const Shape& input_shape() const { return input_shape_; }
    /// Per-sample output shape of layer range [0, end).
    Shape output_shape(std::size_t end) const;
    Shape output_shape() const { return output_shape(size()); }

    std::size_t size() const { return layers_.size(); }
    Layer<T>& layer(std::size_t i) { return *layers_.at(i); }
    const Layer<T>& layer(std::size_t i) const { return *layers_.at(i); }

    bool frozen(std::size_t i) const { return frozen_.at(i); }
    void set_frozen(std::size_t i, bool value) { frozen_.at(i) = value; }
    /// Number of leading layers that are all frozen.
    std::size_t frozen_prefix() const;

    std::size_t count(LayerKind kind) const;
    std::size_t parameter_count() const;

    /// Layer range [first, last); input carries a leading batch dimension.
    Tensor<T> forward(const Tensor<T>& input, std::size_t first, std::size_t last);
    Tensor<T> forward(const Tensor<T>& input) { return forward(input, 0, size()); }
    Tensor<T> infer(const Tensor<T>& input, std::size_t first, std::size_t last) const;
    Tensor<T> infer(const Tensor<T>& input) const { return infer(input, 0, size()); }

    /// Output of layer i from the most recent forward() (empty when outside
    /// the cached range).
    const Tensor<T>& activation(std::size_t i) const { return activations_.at(i); }

    /// Back-propagates through the range of the last forward(); returns the
    /// gradient with respect to that range's input.
    Tensor<T> backward(const Tensor<T>& grad_output);

    bool has_gradients() const { return gradients_ready_; }
    void zero_grad();

    /// Fan-in scaled uniform init of layers [first, size()); gain 2 for
    /// layers feeding a ReLU.
    void initialize(std::uint64_t seed, std::size_t first = 0);

    template <typename U>
    Network<U> cast() const;

private:
    Shape input_shape_;
    std::vector<std::unique_ptr<Layer<T>>> layers_;
    std::vector<bool> frozen_;
    std::vector<Tensor<T>> activations_;
    std::optional<std::pair<std::size_t, std::size_t>> cached_range_;
    bool gradients_ready_ = false;

    template <typename U>
    friend class Network;
};

}  // namespace fsem

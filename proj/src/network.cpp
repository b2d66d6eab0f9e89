#include "fsem/network.hpp"

#include <stdexcept>
#include <string>

namespace fsem {

template <typename T>
Network<T>::Network(const Network& other) : input_shape_(other.input_shape_), frozen_(other.frozen_) {
    layers_.reserve(other.layers_.size());
    for (const auto& l : other.layers_) {
        auto copy = l->clone();
        copy->clear_cache();
        layers_.push_back(std::move(copy));
    }
}

template <typename T>
Network<T>& Network<T>::operator=(const Network& other) {
    if (this != &other) *this = Network(other);
    return *this;
}

template <typename T>
Network<T>& Network<T>::add(std::unique_ptr<Layer<T>> layer, bool frozen) {
    if (input_shape_.empty()) throw std::logic_error("Network::add: network has no declared input shape");
    const Shape current = output_shape();
    try {
        layer->output_shape(current);
    } catch (const std::invalid_argument& e) {
        const std::string previous = layers_.empty() ? std::string("network input")
                                                     : "layer " + std::to_string(layers_.size() - 1) + " (" +
                                                           layers_.back()->describe() + ")";
        throw std::invalid_argument("shape mismatch between " + previous + " producing " +
                                    shape_to_string(current) + " and layer " + std::to_string(layers_.size()) +
                                    " (" + layer->describe() + "): " + e.what());
    }
    layers_.push_back(std::move(layer));
    frozen_.push_back(frozen);
    activations_.clear();
    cached_range_.reset();
    return *this;
}

template <typename T>
Shape Network<T>::output_shape(std::size_t end) const {
    Shape s = input_shape_;
    for (std::size_t i = 0; i < end && i < layers_.size(); ++i) s = layers_[i]->output_shape(s);
    return s;
}

template <typename T>
std::size_t Network<T>::frozen_prefix() const {
    std::size_t n = 0;
    while (n < frozen_.size() && frozen_[n]) ++n;
    return n;
}

template <typename T>
std::size_t Network<T>::count(LayerKind kind) const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l->kind() == kind ? 1 : 0;
    return n;
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) {
        for (const Tensor<T>* p : std::as_const(*l).parameters()) n += p->size();
    }
    return n;
}

namespace {

void check_range(std::size_t first, std::size_t last, std::size_t size) {
    if (first > last || last > size) {
        throw std::out_of_range("layer range [" + std::to_string(first) + ", " + std::to_string(last) +
                                ") outside network of " + std::to_string(size) + " layers");
    }
}

}  // namespace

template <typename T>
Tensor<T> Network<T>::forward(const Tensor<T>& input, std::size_t first, std::size_t last) {
    check_range(first, last, layers_.size());
    const Shape expected = output_shape(first);
    const Shape got(input.shape().begin() + (input.rank() ? 1 : 0), input.shape().end());
    if (got != expected) {
        throw std::invalid_argument("Network::forward: input per-sample shape " + shape_to_string(got) +
                                    " does not match expected " + shape_to_string(expected));
    }
    for (auto& l : layers_) l->clear_cache();
    activations_.assign(layers_.size(), Tensor<T>());
    Tensor<T> x = input;
    for (std::size_t i = first; i < last; ++i) {
        x = layers_[i]->forward(x);
        activations_[i] = x;
    }
    cached_range_ = std::make_pair(first, last);
    return x;
}

template <typename T>
Tensor<T> Network<T>::infer(const Tensor<T>& input, std::size_t first, std::size_t last) const {
    check_range(first, last, layers_.size());
    Tensor<T> x = input;
    for (std::size_t i = first; i < last; ++i) x = layers_[i]->infer(x);
    return x;
}

template <typename T>
Tensor<T> Network<T>::backward(const Tensor<T>& grad_output) {
    if (!cached_range_) throw std::logic_error("Network::backward called without a prior forward pass");
    const auto [first, last] = *cached_range_;
    Tensor<T> g = grad_output;
    for (std::size_t i = last; i-- > first;) g = layers_[i]->backward(g, !frozen_[i]);
    for (auto& l : layers_) l->clear_cache();
    activations_.clear();
    cached_range_.reset();
    gradients_ready_ = true;
    return g;
}

template <typename T>
void Network<T>::zero_grad() {
    for (auto& l : layers_) {
        for (Tensor<T>* g : l->gradients()) g->fill(T{0});
    }
    gradients_ready_ = false;
}

template <typename T>
void Network<T>::initialize(std::uint64_t seed, std::size_t first) {
    Rng rng(seed);
    for (std::size_t i = first; i < layers_.size(); ++i) {
        const bool feeds_relu = i + 1 < layers_.size() && layers_[i + 1]->kind() == LayerKind::relu;
        layers_[i]->initialize(rng, feeds_relu ? 2.0 : 1.0);
    }
}

template <typename T>
template <typename U>
Network<U> Network<T>::cast() const {
    Network<U> out(input_shape_);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        auto layer = make_layer<U>(layers_[i]->kind(), layers_[i]->config());
        auto dst = layer->parameters();
        auto src = std::as_const(*layers_[i]).parameters();
        for (std::size_t p = 0; p < dst.size(); ++p) *dst[p] = src[p]->template cast<U>();
        out.add(std::move(layer), frozen_[i]);
    }
    return out;
}

template class Network<float>;
template class Network<double>;
template Network<double> Network<float>::cast<double>() const;
template Network<float> Network<double>::cast<float>() const;
template Network<float> Network<float>::cast<float>() const;
template Network<double> Network<double>::cast<double>() const;

}  // namespace fsem

#include "fsem/layers.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>

namespace fsem {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

Shape batched(std::size_t batch, const Shape& per_sample) {
    Shape s;
    s.reserve(per_sample.size() + 1);
    s.push_back(batch);
    s.insert(s.end(), per_sample.begin(), per_sample.end());
    return s;
}

template <typename T>
Shape per_sample_shape(const Tensor<T>& t) {
    return Shape(t.shape().begin() + 1, t.shape().end());
}

void require_batched(const Shape& shape, const char* who) {
    if (shape.size() < 2) {
        throw std::invalid_argument(std::string(who) + ": expected a batched tensor, got " + shape_to_string(shape));
    }
}

template <typename T>
void uniform_fill(Tensor<T>& t, Rng& rng, double limit) {
    for (T& v : t.values()) v = static_cast<T>(rng.uniform(-limit, limit));
}

// ---------------------------------------------------------------- convolution

template <typename T>
class Convolution final : public Layer<T> {
public:
    Convolution(std::size_t in_channels, std::size_t out_channels, std::size_t kernel, std::size_t stride,
                std::size_t padding)
        : in_(in_channels), out_(out_channels), kernel_(kernel), stride_(stride), pad_(padding),
          weight_({out_channels, in_channels, kernel, kernel}), bias_({out_channels}),
          weight_grad_(weight_.shape()), bias_grad_(bias_.shape()) {
        if (stride == 0) throw std::invalid_argument("convolution: stride must be positive");
    }

    LayerKind kind() const override { return LayerKind::convolution; }
    LayerConfig config() const override {
        return {static_cast<std::uint32_t>(in_), static_cast<std::uint32_t>(out_),
                static_cast<std::uint32_t>(kernel_), static_cast<std::uint32_t>(stride_),
                static_cast<std::uint32_t>(pad_)};
    }

    Shape output_shape(const Shape& in) const override {
        if (in.size() != 3 || in[0] != in_) {
            throw std::invalid_argument(this->describe() + " expects input [" + std::to_string(in_) +
                                        " x H x W], got " + shape_to_string(in));
        }
        if (in[1] + 2 * pad_ < kernel_ || in[2] + 2 * pad_ < kernel_) {
            throw std::invalid_argument(this->describe() + ": kernel larger than padded input " +
                                        shape_to_string(in));
        }
        return {out_, (in[1] + 2 * pad_ - kernel_) / stride_ + 1, (in[2] + 2 * pad_ - kernel_) / stride_ + 1};
    }

    Tensor<T> forward(const Tensor<T>& x) override {
        require_batched(x.shape(), "convolution");
        input_shape_ = x.shape();
        const Shape out_shape = output_shape(per_sample_shape(x));
        const std::size_t rows = in_ * kernel_ * kernel_;
        const std::size_t cols = out_shape[1] * out_shape[2];
        columns_.assign(x.dim(0) * rows * cols, T{0});
        return run(x, out_shape, columns_.data(), true);
    }

    Tensor<T> infer(const Tensor<T>& x) const override {
        require_batched(x.shape(), "convolution");
        const Shape out_shape = output_shape(per_sample_shape(x));
        AlignedBuffer<T> scratch(in_ * kernel_ * kernel_ * out_shape[1] * out_shape[2]);
        return run(x, out_shape, scratch.data(), false);
    }

    Tensor<T> backward(const Tensor<T>& grad_out, bool accumulate) override {
        if (input_shape_.empty()) throw std::logic_error("convolution: backward without forward");
        const std::size_t batch = input_shape_[0];
        const std::size_t height = input_shape_[2], width = input_shape_[3];
        const std::size_t out_h = grad_out.dim(2), out_w = grad_out.dim(3);
        const std::size_t rows = in_ * kernel_ * kernel_;
        const std::size_t cols = out_h * out_w;

        Tensor<T> grad_in(input_shape_);
        ConstMatMap<T> w(weight_.data(), out_, rows);
        MatMap<T> dw(weight_grad_.data(), out_, rows);
        RowMat<T> dcol(rows, cols);
        for (std::size_t b = 0; b < batch; ++b) {
            ConstMatMap<T> g(grad_out.data() + b * out_ * cols, out_, cols);
            ConstMatMap<T> col(columns_.data() + b * rows * cols, rows, cols);
            if (accumulate) {
                dw.noalias() += g * col.transpose();
                for (std::size_t o = 0; o < out_; ++o) bias_grad_[o] += g.row(o).sum();
            }
            dcol.noalias() = w.transpose() * g;
            col2im(dcol.data(), grad_in.data() + b * in_ * height * width, height, width, out_h, out_w);
        }
        return grad_in;
    }

    void clear_cache() override {
        columns_.clear();
        columns_.shrink_to_fit();
        input_shape_.clear();
    }

    std::vector<Tensor<T>*> parameters() override { return {&weight_, &bias_}; }
    std::vector<const Tensor<T>*> parameters() const override { return {&weight_, &bias_}; }
    std::vector<Tensor<T>*> gradients() override { return {&weight_grad_, &bias_grad_}; }

    void initialize(Rng& rng, double gain) override {
        const double fan_in = static_cast<double>(in_ * kernel_ * kernel_);
        uniform_fill(weight_, rng, std::sqrt(3.0 * gain / fan_in));
        bias_.fill(T{0});
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Convolution>(*this); }

private:
    Tensor<T> run(const Tensor<T>& x, const Shape& out_shape, T* columns, bool keep_all) const {
        const std::size_t batch = x.dim(0);
        const std::size_t height = x.dim(2), width = x.dim(3);
        const std::size_t rows = in_ * kernel_ * kernel_;
        const std::size_t cols = out_shape[1] * out_shape[2];
        Tensor<T> y(batched(batch, out_shape));
        ConstMatMap<T> w(weight_.data(), out_, rows);
        for (std::size_t b = 0; b < batch; ++b) {
            T* col_ptr = keep_all ? columns + b * rows * cols : columns;
            im2col(x.data() + b * in_ * height * width, col_ptr, height, width, out_shape[1], out_shape[2]);
            ConstMatMap<T> col(col_ptr, rows, cols);
            MatMap<T> out(y.data() + b * out_ * cols, out_, cols);
            out.noalias() = w * col;
            for (std::size_t o = 0; o < out_; ++o) out.row(o).array() += bias_[o];
        }
        return y;
    }

    void im2col(const T* image, T* col, std::size_t height, std::size_t width, std::size_t out_h,
                std::size_t out_w) const {
        const auto pad = static_cast<std::ptrdiff_t>(pad_);
        for (std::size_t c = 0; c < in_; ++c) {
            for (std::size_t ky = 0; ky < kernel_; ++ky) {
                for (std::size_t kx = 0; kx < kernel_; ++kx) {
                    T* row = col + ((c * kernel_ + ky) * kernel_ + kx) * out_h * out_w;
                    for (std::size_t oy = 0; oy < out_h; ++oy) {
                        const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) - pad;
                        for (std::size_t ox = 0; ox < out_w; ++ox) {
                            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride_ + kx) - pad;
                            const bool inside = iy >= 0 && ix >= 0 && iy < static_cast<std::ptrdiff_t>(height) &&
                                                ix < static_cast<std::ptrdiff_t>(width);
                            row[oy * out_w + ox] = inside ? image[(c * height + iy) * width + ix] : T{0};
                        }
                    }
                }
            }
        }
    }

    void col2im(const T* col, T* image, std::size_t height, std::size_t width, std::size_t out_h,
                std::size_t out_w) const {
        const auto pad = static_cast<std::ptrdiff_t>(pad_);
        for (std::size_t c = 0; c < in_; ++c) {
            for (std::size_t ky = 0; ky < kernel_; ++ky) {
                for (std::size_t kx = 0; kx < kernel_; ++kx) {
                    const T* row = col + ((c * kernel_ + ky) * kernel_ + kx) * out_h * out_w;
                    for (std::size_t oy = 0; oy < out_h; ++oy) {
                        const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) - pad;
                        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(height)) continue;
                        for (std::size_t ox = 0; ox < out_w; ++ox) {
                            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride_ + kx) - pad;
                            if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(width)) continue;
                            image[(c * height + iy) * width + ix] += row[oy * out_w + ox];
                        }
                    }
                }
            }
        }
    }

    std::size_t in_, out_, kernel_, stride_, pad_;
    Tensor<T> weight_, bias_, weight_grad_, bias_grad_;
    AlignedBuffer<T> columns_;
    Shape input_shape_;
};

// --------------------------------------------------------------------- linear

template <typename T>
class Linear final : public Layer<T> {
public:
    Linear(std::size_t in_features, std::size_t out_features)
        : in_(in_features), out_(out_features), weight_({out_features, in_features}), bias_({out_features}),
          weight_grad_(weight_.shape()), bias_grad_(bias_.shape()) {}

    LayerKind kind() const override { return LayerKind::linear; }
    LayerConfig config() const override {
        return {static_cast<std::uint32_t>(in_), static_cast<std::uint32_t>(out_)};
    }

    Shape output_shape(const Shape& in) const override {
        if (in.size() != 1 || in[0] != in_) {
            throw std::invalid_argument(this->describe() + " expects input [" + std::to_string(in_) + "], got " +
                                        shape_to_string(in));
        }
        return {out_};
    }

    Tensor<T> forward(const Tensor<T>& x) override {
        input_ = x;
        return infer(x);
    }

    Tensor<T> infer(const Tensor<T>& x) const override {
        require_batched(x.shape(), "linear");
        output_shape(per_sample_shape(x));
        const std::size_t batch = x.dim(0);
        Tensor<T> y({batch, out_});
        ConstMatMap<T> xs(x.data(), batch, in_);
        ConstMatMap<T> w(weight_.data(), out_, in_);
        MatMap<T> ys(y.data(), batch, out_);
        ys.noalias() = xs * w.transpose();
        Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> b(bias_.data(), out_);
        ys.rowwise() += b;
        return y;
    }

    Tensor<T> backward(const Tensor<T>& grad_out, bool accumulate) override {
        if (input_.empty()) throw std::logic_error("linear: backward without forward");
        const std::size_t batch = input_.dim(0);
        ConstMatMap<T> g(grad_out.data(), batch, out_);
        ConstMatMap<T> xs(input_.data(), batch, in_);
        ConstMatMap<T> w(weight_.data(), out_, in_);
        if (accumulate) {
            MatMap<T> dw(weight_grad_.data(), out_, in_);
            dw.noalias() += g.transpose() * xs;
            Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>> db(bias_grad_.data(), out_);
            db += g.colwise().sum();
        }
        Tensor<T> grad_in(input_.shape());
        MatMap<T> dx(grad_in.data(), batch, in_);
        dx.noalias() = g * w;
        return grad_in;
    }

    void clear_cache() override { input_ = Tensor<T>(); }

    std::vector<Tensor<T>*> parameters() override { return {&weight_, &bias_}; }
    std::vector<const Tensor<T>*> parameters() const override { return {&weight_, &bias_}; }
    std::vector<Tensor<T>*> gradients() override { return {&weight_grad_, &bias_grad_}; }

    void initialize(Rng& rng, double gain) override {
        uniform_fill(weight_, rng, std::sqrt(3.0 * gain / static_cast<double>(in_)));
        bias_.fill(T{0});
    }

    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Linear>(*this); }

private:
    std::size_t in_, out_;
    Tensor<T> weight_, bias_, weight_grad_, bias_grad_;
    Tensor<T> input_;
};

// ---------------------------------------------------------------- elementwise

template <typename T>
class Relu final : public Layer<T> {
public:
    LayerKind kind() const override { return LayerKind::relu; }
    Shape output_shape(const Shape& in) const override { return in; }

    Tensor<T> forward(const Tensor<T>& x) override {
        input_ = x;
        return infer(x);
    }
    Tensor<T> infer(const Tensor<T>& x) const override {
        Tensor<T> y = x;
        for (T& v : y.values()) v = v > T{0} ? v : T{0};
        return y;
    }
    // Subgradient at exactly zero is 0.
    Tensor<T> backward(const Tensor<T>& grad_out, bool) override {
        if (input_.empty()) throw std::logic_error("relu: backward without forward");
        Tensor<T> g = grad_out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(input_[i] > T{0})) g[i] = T{0};
        }
        return g;
    }
    void clear_cache() override { input_ = Tensor<T>(); }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Relu>(*this); }

private:
    Tensor<T> input_;
};

template <typename T>
class Sigmoid final : public Layer<T> {
public:
    LayerKind kind() const override { return LayerKind::sigmoid; }
    Shape output_shape(const Shape& in) const override { return in; }

    Tensor<T> forward(const Tensor<T>& x) override {
        output_ = infer(x);
        return output_;
    }
    Tensor<T> infer(const Tensor<T>& x) const override {
        Tensor<T> y = x;
        for (T& v : y.values()) v = T{1} / (T{1} + std::exp(-v));
        return y;
    }
    Tensor<T> backward(const Tensor<T>& grad_out, bool) override {
        if (output_.empty()) throw std::logic_error("sigmoid: backward without forward");
        Tensor<T> g = grad_out;
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= output_[i] * (T{1} - output_[i]);
        return g;
    }
    void clear_cache() override { output_ = Tensor<T>(); }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Sigmoid>(*this); }

private:
    Tensor<T> output_;
};

template <typename T>
class Softmax final : public Layer<T> {
public:
    LayerKind kind() const override { return LayerKind::softmax; }
    Shape output_shape(const Shape& in) const override {
        if (in.size() != 1) {
            throw std::invalid_argument("softmax expects a flat feature vector, got " + shape_to_string(in));
        }
        return in;
    }

    Tensor<T> forward(const Tensor<T>& x) override {
        output_ = infer(x);
        return output_;
    }
    Tensor<T> infer(const Tensor<T>& x) const override { return softmax(x); }

    // dx = y * (g - <g, y>) per row.
    Tensor<T> backward(const Tensor<T>& grad_out, bool) override {
        if (output_.empty()) throw std::logic_error("softmax: backward without forward");
        const std::size_t rows = output_.dim(0), cols = output_.dim(1);
        Tensor<T> g(output_.shape());
        for (std::size_t r = 0; r < rows; ++r) {
            T dot{0};
            for (std::size_t c = 0; c < cols; ++c) dot += grad_out.at(r, c) * output_.at(r, c);
            for (std::size_t c = 0; c < cols; ++c) g.at(r, c) = output_.at(r, c) * (grad_out.at(r, c) - dot);
        }
        return g;
    }
    void clear_cache() override { output_ = Tensor<T>(); }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Softmax>(*this); }

private:
    Tensor<T> output_;
};

// -------------------------------------------------------------------- pooling

template <typename T>
class MaxPool final : public Layer<T> {
public:
    MaxPool(std::size_t window, std::size_t stride) : window_(window), stride_(stride == 0 ? window : stride) {
        if (window == 0) throw std::invalid_argument("max-pool: window must be positive");
    }

    LayerKind kind() const override { return LayerKind::max_pool; }
    LayerConfig config() const override {
        return {static_cast<std::uint32_t>(window_), static_cast<std::uint32_t>(stride_)};
    }

    Shape output_shape(const Shape& in) const override {
        if (in.size() != 3 || in[1] < window_ || in[2] < window_) {
            throw std::invalid_argument(this->describe() + " expects [C x H x W] with H, W >= " +
                                        std::to_string(window_) + ", got " + shape_to_string(in));
        }
        return {in[0], (in[1] - window_) / stride_ + 1, (in[2] - window_) / stride_ + 1};
    }

    Tensor<T> forward(const Tensor<T>& x) override {
        input_shape_ = x.shape();
        return run(x, &argmax_);
    }
    Tensor<T> infer(const Tensor<T>& x) const override { return run(x, nullptr); }

    Tensor<T> backward(const Tensor<T>& grad_out, bool) override {
        if (input_shape_.empty()) throw std::logic_error("max-pool: backward without forward");
        Tensor<T> g(input_shape_);
        for (std::size_t i = 0; i < grad_out.size(); ++i) g[argmax_[i]] += grad_out[i];
        return g;
    }

    void clear_cache() override {
        argmax_.clear();
        input_shape_.clear();
    }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<MaxPool>(*this); }

private:
    // Ties resolve to the first maximum in row-major window order.
    Tensor<T> run(const Tensor<T>& x, std::vector<std::size_t>* argmax) const {
        require_batched(x.shape(), "max-pool");
        const Shape out = output_shape(per_sample_shape(x));
        const std::size_t batch = x.dim(0), channels = x.dim(1), height = x.dim(2), width = x.dim(3);
        Tensor<T> y(batched(batch, out));
        if (argmax) argmax->assign(y.size(), 0);
        std::size_t o = 0;
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t c = 0; c < channels; ++c) {
                const std::size_t plane = (b * channels + c) * height * width;
                for (std::size_t oy = 0; oy < out[1]; ++oy) {
                    for (std::size_t ox = 0; ox < out[2]; ++ox, ++o) {
                        std::size_t best = plane + (oy * stride_) * width + ox * stride_;
                        for (std::size_t ky = 0; ky < window_; ++ky) {
                            for (std::size_t kx = 0; kx < window_; ++kx) {
                                const std::size_t idx = plane + (oy * stride_ + ky) * width + ox * stride_ + kx;
                                if (x[idx] > x[best]) best = idx;
                            }
                        }
                        y[o] = x[best];
                        if (argmax) (*argmax)[o] = best;
                    }
                }
            }
        }
        return y;
    }

    std::size_t window_, stride_;
    std::vector<std::size_t> argmax_;
    Shape input_shape_;
};

template <typename T>
class Flatten final : public Layer<T> {
public:
    LayerKind kind() const override { return LayerKind::flatten; }
    Shape output_shape(const Shape& in) const override { return {shape_size(in)}; }

    Tensor<T> forward(const Tensor<T>& x) override {
        input_shape_ = x.shape();
        return infer(x);
    }
    Tensor<T> infer(const Tensor<T>& x) const override {
        require_batched(x.shape(), "flatten");
        return x.reshaped({x.dim(0), x.size() / x.dim(0)});
    }
    Tensor<T> backward(const Tensor<T>& grad_out, bool) override {
        if (input_shape_.empty()) throw std::logic_error("flatten: backward without forward");
        return grad_out.reshaped(input_shape_);
    }
    void clear_cache() override { input_shape_.clear(); }
    std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Flatten>(*this); }

private:
    Shape input_shape_;
};

}  // namespace

std::string shape_to_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += " x ";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::convolution: return "convolution";
        case LayerKind::linear: return "linear";
        case LayerKind::relu: return "relu";
        case LayerKind::sigmoid: return "sigmoid";
        case LayerKind::softmax: return "softmax";
        case LayerKind::max_pool: return "max-pool";
        case LayerKind::flatten: return "flatten";
    }
    return "unknown";
}

template <typename T>
std::string Layer<T>::describe() const {
    std::ostringstream os;
    os << to_string(kind());
    const LayerConfig cfg = config();
    if (!cfg.empty()) {
        os << '(';
        for (std::size_t i = 0; i < cfg.size(); ++i) os << (i ? "," : "") << cfg[i];
        os << ')';
    }
    return os.str();
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
    if (logits.rank() != 2) throw std::invalid_argument("softmax: expected [batch x classes]");
    Tensor<T> out(logits.shape());
    const std::size_t rows = logits.dim(0), cols = logits.dim(1);
    for (std::size_t r = 0; r < rows; ++r) {
        T peak = logits.at(r, 0);
        for (std::size_t c = 1; c < cols; ++c) peak = std::max(peak, logits.at(r, c));
        T total{0};
        for (std::size_t c = 0; c < cols; ++c) {
            out.at(r, c) = std::exp(logits.at(r, c) - peak);
            total += out.at(r, c);
        }
        for (std::size_t c = 0; c < cols; ++c) out.at(r, c) /= total;
    }
    return out;
}

template <typename T>
std::unique_ptr<Layer<T>> make_convolution(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
                                           std::size_t stride, std::size_t padding) {
    return std::make_unique<Convolution<T>>(in_channels, out_channels, kernel, stride, padding);
}
template <typename T>
std::unique_ptr<Layer<T>> make_linear(std::size_t in_features, std::size_t out_features) {
    return std::make_unique<Linear<T>>(in_features, out_features);
}
template <typename T>
std::unique_ptr<Layer<T>> make_max_pool(std::size_t window, std::size_t stride) {
    return std::make_unique<MaxPool<T>>(window, stride);
}
template <typename T>
std::unique_ptr<Layer<T>> make_relu() {
    return std::make_unique<Relu<T>>();
}
template <typename T>
std::unique_ptr<Layer<T>> make_sigmoid() {
    return std::make_unique<Sigmoid<T>>();
}
template <typename T>
std::unique_ptr<Layer<T>> make_softmax() {
    return std::make_unique<Softmax<T>>();
}
template <typename T>
std::unique_ptr<Layer<T>> make_flatten() {
    return std::make_unique<Flatten<T>>();
}

template <typename T>
std::unique_ptr<Layer<T>> make_layer(LayerKind kind, const LayerConfig& cfg) {
    auto need = [&](std::size_t n) {
        if (cfg.size() != n) {
            throw std::invalid_argument(std::string(to_string(kind)) + ": expected " + std::to_string(n) +
                                        " config values, got " + std::to_string(cfg.size()));
        }
    };
    switch (kind) {
        case LayerKind::convolution: need(5); return make_convolution<T>(cfg[0], cfg[1], cfg[2], cfg[3], cfg[4]);
        case LayerKind::linear: need(2); return make_linear<T>(cfg[0], cfg[1]);
        case LayerKind::max_pool: need(2); return make_max_pool<T>(cfg[0], cfg[1]);
        case LayerKind::relu: need(0); return make_relu<T>();
        case LayerKind::sigmoid: need(0); return make_sigmoid<T>();
        case LayerKind::softmax: need(0); return make_softmax<T>();
        case LayerKind::flatten: need(0); return make_flatten<T>();
    }
    throw std::invalid_argument("unknown layer kind " + std::to_string(static_cast<std::uint32_t>(kind)));
}

#define FSEM_INSTANTIATE_LAYERS(T)                                                                           \
    template class Layer<T>;                                                                                 \
    template Tensor<T> softmax<T>(const Tensor<T>&);                                                         \
    template std::unique_ptr<Layer<T>> make_layer<T>(LayerKind, const LayerConfig&);                         \
    template std::unique_ptr<Layer<T>> make_convolution<T>(std::size_t, std::size_t, std::size_t, std::size_t, \
                                                           std::size_t);                                     \
    template std::unique_ptr<Layer<T>> make_linear<T>(std::size_t, std::size_t);                             \
    template std::unique_ptr<Layer<T>> make_max_pool<T>(std::size_t, std::size_t);                           \
    template std::unique_ptr<Layer<T>> make_relu<T>();                                                       \
    template std::unique_ptr<Layer<T>> make_sigmoid<T>();                                                    \
    template std::unique_ptr<Layer<T>> make_softmax<T>();                                                    \
    template std::unique_ptr<Layer<T>> make_flatten<T>();

FSEM_INSTANTIATE_LAYERS(float)
FSEM_INSTANTIATE_LAYERS(double)

}  // namespace fsem

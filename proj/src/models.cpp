#include "fsem/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fsem/binary.hpp"
#include "fsem/checkpoint.hpp"
#include "fsem/loss.hpp"
#include "fsem/optimizer.hpp"
#include "fsem/rng.hpp"
#include "fsem/sampling.hpp"

namespace fsem {

namespace {

constexpr std::size_t kInferChunk = 256;

const std::pair<ModelKind, const char*> kKindNames[] = {
    {ModelKind::logistic_regression, "logistic-regression"},
    {ModelKind::cnn, "cnn"},
    {ModelKind::transfer, "transfer"},
    {ModelKind::siamese, "siamese"},
    {ModelKind::siamese_transfer, "siamese-transfer"},
};

std::string join(const std::vector<std::uint32_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

std::vector<std::uint32_t> parse_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Rows idx of a batch-major tensor.
Tensor<float> gather(const Tensor<float>& x, std::span<const std::size_t> idx) {
    Shape shape = x.shape();
    const std::size_t row = x.size() / shape[0];
    shape[0] = idx.size();
    Tensor<float> out(shape);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        std::memcpy(out.data() + i * row, x.data() + idx[i] * row, row * sizeof(float));
    }
    return out;
}

Tensor<float> infer_chunked(const Network<float>& net, const Tensor<float>& x, std::size_t first, std::size_t last) {
    const std::size_t n = x.dim(0);
    if (n <= kInferChunk) return net.infer(x, first, last);
    AlignedBuffer<float> values;
    Shape out_shape;
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < n; start += kInferChunk) {
        idx.resize(std::min(kInferChunk, n - start));
        std::iota(idx.begin(), idx.end(), start);
        const Tensor<float> part = net.infer(gather(x, idx), first, last);
        out_shape = part.shape();
        values.insert(values.end(), part.values().begin(), part.values().end());
    }
    out_shape[0] = n;
    return Tensor<float>(out_shape, std::move(values));
}

Matrix to_matrix(const Tensor<float>& t) {
    const std::size_t rows = t.dim(0), cols = t.size() / rows;
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < t.size(); ++i) m.data()[i] = static_cast<double>(t[i]);
    return m;
}

std::vector<std::size_t> row_argmax(const Tensor<float>& t) {
    const std::size_t rows = t.dim(0), cols = t.size() / rows;
    std::vector<std::size_t> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const float* p = t.data() + r * cols;
        out[r] = static_cast<std::size_t>(std::max_element(p, p + cols) - p);
    }
    return out;
}

double accuracy(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Shape image_shape(const LabeledDataset& ds) {
    if (ds.samples.empty()) throw std::invalid_argument("training set is empty");
    const ImageSample& s = ds.samples.front();
    return {s.channels(), s.height(), s.width()};
}

void add_conv_blocks(Network<float>& net, const std::vector<std::uint32_t>& channels) {
    for (std::uint32_t out : channels) {
        const std::size_t in = net.output_shape()[0];
        net.add(make_convolution<float>(in, out, 3, 1, 1));
        net.add(make_relu<float>());
        net.add(make_max_pool<float>(2));
    }
}

void copy_layers(Network<float>& net, const Network<float>& from, bool frozen) {
    if (from.input_shape() != net.input_shape()) {
        throw std::invalid_argument("backbone expects input " + shape_to_string(from.input_shape()) +
                                    " but the images are " + shape_to_string(net.input_shape()));
    }
    for (std::size_t i = 0; i < from.size(); ++i) net.add(from.layer(i).clone(), frozen);
}

void add_classifier_head(Network<float>& net, const std::vector<std::uint32_t>& hidden, std::size_t categories) {
    net.add(make_flatten<float>());
    for (std::uint32_t width : hidden) {
        net.add(make_linear<float>(net.output_shape()[0], width));
        net.add(make_relu<float>());
    }
    net.add(make_linear<float>(net.output_shape()[0], categories));
    net.add(make_softmax<float>());
}

void check_finite(float loss, std::uint32_t epoch) {
    if (!std::isfinite(loss)) {
        throw std::runtime_error("training diverged at epoch " + std::to_string(epoch + 1) + ": non-finite loss");
    }
}

OptimizerState<float> make_optimizer(const ModelRecipe& r) {
    OptimizerState<float> opt;
    opt.learning_rate = static_cast<float>(r.learning_rate);
    opt.momentum = static_cast<float>(r.momentum);
    return opt;
}

// Mini-batch cross-entropy training of layers [frozen prefix, softmax).
// Frozen-prefix features are computed once.
std::vector<EpochRecord> fit_classifier(Network<float>& net, const LabeledDataset& train,
                                        const LabeledDataset* validation, const ModelRecipe& r) {
    const std::size_t first = net.frozen_prefix();
    const std::size_t last = net.size() - 1;
    const std::vector<std::size_t> labels = train.labels();
    const Tensor<float> features = infer_chunked(net, to_batch(train), 0, first);
    std::optional<Tensor<float>> val_features;
    std::vector<std::size_t> val_labels;
    if (validation && validation->size() > 0) {
        val_features = infer_chunked(net, to_batch(*validation), 0, first);
        val_labels = validation->labels();
    }

    OptimizerState<float> opt = make_optimizer(r);
    Rng order_rng(mix_seed(r.seed, 1));
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<EpochRecord> trace;
    for (std::uint32_t epoch = 0; epoch < r.epochs; ++epoch) {
        order_rng.shuffle(std::span<std::size_t>(order));
        double total = 0.0;
        for (std::size_t start = 0; start < order.size(); start += r.batch_size) {
            const std::span<const std::size_t> idx(order.data() + start,
                                                   std::min<std::size_t>(r.batch_size, order.size() - start));
            std::vector<std::size_t> batch_labels(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) batch_labels[i] = labels[idx[i]];
            const Tensor<float> logits = net.forward(gather(features, idx), first, last);
            const LossValue<float> lv = cross_entropy(logits, batch_labels);
            check_finite(lv.loss, epoch);
            net.backward(lv.grad);
            optimize_step(net, opt);
            total += static_cast<double>(lv.loss) * static_cast<double>(idx.size());
        }
        EpochRecord rec{total / static_cast<double>(train.size()), std::numeric_limits<double>::quiet_NaN()};
        if (val_features) {
            rec.validation_accuracy = accuracy(row_argmax(infer_chunked(net, *val_features, first, last)), val_labels);
        }
        trace.push_back(rec);
    }
    return trace;
}

Network<float> build_classifier(const Shape& input, const ModelRecipe& r, std::size_t categories) {
    Network<float> net(input);
    if (r.kind == ModelKind::logistic_regression) {
        add_classifier_head(net, {}, categories);
    } else {
        if (input[1] != input[2] || input[1] < (std::size_t{1} << r.conv_channels.size())) {
            throw std::invalid_argument("cnn: images must be square and at least " +
                                        std::to_string(std::size_t{1} << r.conv_channels.size()) + " pixels wide, got " +
                                        shape_to_string(input));
        }
        add_conv_blocks(net, r.conv_channels);
        add_classifier_head(net, r.hidden_widths, categories);
    }
    net.initialize(mix_seed(r.seed, 0));
    return net;
}

void require_kind(const ModelRecipe& r, std::initializer_list<ModelKind> kinds, const char* op) {
    r.validate();
    if (std::find(kinds.begin(), kinds.end(), r.kind) == kinds.end()) {
        throw std::invalid_argument(std::string(op) + ": recipe kind " + to_string(r.kind) + " not accepted");
    }
}

TrainedModel train_classifier(const SplitDataset& split, const ModelRecipe& r) {
    const LabeledDataset train = split.train_set();
    const LabeledDataset validation = split.validation_set();
    TrainedModel model{r, build_classifier(image_shape(train), r, split.parent->category_count()), std::nullopt, {}};
    model.trace = fit_classifier(model.network, train, &validation, r);
    return model;
}

}  // namespace

std::string to_string(ModelKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    throw std::invalid_argument("unknown model kind");
}

ModelKind parse_model_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (name == n) return k;
    }
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

bool is_siamese(ModelKind kind) { return kind == ModelKind::siamese || kind == ModelKind::siamese_transfer; }

void ModelRecipe::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("model recipe: " + what); };
    const bool uses_conv = kind != ModelKind::logistic_regression;
    if (uses_conv && conv_channels.empty()) fail("conv_channels must not be empty");
    if (std::find(conv_channels.begin(), conv_channels.end(), 0u) != conv_channels.end()) fail("zero conv width");
    if (std::find(hidden_widths.begin(), hidden_widths.end(), 0u) != hidden_widths.end()) fail("zero hidden width");
    if (is_siamese(kind) && embedding_dim < 2) fail("embedding_dim must be >= 2 for siamese kinds");
    if (batch_size == 0) fail("batch_size must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) fail("momentum must lie in [0, 1)");
    if (!(margin > 0.0)) fail("margin must be positive");
    if (pairs_per_sample == 0) fail("pairs_per_sample must be positive");
    if (!(positive_ratio > 0.0 && positive_ratio < 1.0)) fail("positive_ratio must lie in (0, 1)");
}

std::string ModelRecipe::to_text() const {
    std::string out;
    out += "kind=" + to_string(kind) + "\n";
    out += "conv_channels=" + join(conv_channels) + "\n";
    out += "hidden_widths=" + join(hidden_widths) + "\n";
    out += "embedding_dim=" + std::to_string(embedding_dim) + "\n";
    out += "epochs=" + std::to_string(epochs) + "\n";
    out += "batch_size=" + std::to_string(batch_size) + "\n";
    out += "learning_rate=" + format_double(learning_rate) + "\n";
    out += "momentum=" + format_double(momentum) + "\n";
    out += "margin=" + format_double(margin) + "\n";
    out += "pairs_per_sample=" + std::to_string(pairs_per_sample) + "\n";
    out += "positive_ratio=" + format_double(positive_ratio) + "\n";
    out += "seed=" + std::to_string(seed) + "\n";
    return out;
}

ModelRecipe ModelRecipe::from_text(std::string_view text) {
    ModelRecipe r;
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("model recipe: malformed line '" + line + "'");
        const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "kind") r.kind = parse_model_kind(value);
        else if (key == "conv_channels") r.conv_channels = parse_list(value);
        else if (key == "hidden_widths") r.hidden_widths = parse_list(value);
        else if (key == "embedding_dim") r.embedding_dim = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "epochs") r.epochs = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "batch_size") r.batch_size = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "learning_rate") r.learning_rate = std::stod(value);
        else if (key == "momentum") r.momentum = std::stod(value);
        else if (key == "margin") r.margin = std::stod(value);
        else if (key == "pairs_per_sample") r.pairs_per_sample = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "positive_ratio") r.positive_ratio = std::stod(value);
        else if (key == "seed") r.seed = std::stoull(value);
        else throw std::invalid_argument("model recipe: unknown key '" + key + "'");
    }
    return r;
}

TrainedModel train_logistic_regression(const SplitDataset& split, const ModelRecipe& recipe) {
    require_kind(recipe, {ModelKind::logistic_regression}, "train_logistic_regression");
    return train_classifier(split, recipe);
}

TrainedModel train_cnn(const SplitDataset& split, const ModelRecipe& recipe) {
    require_kind(recipe, {ModelKind::cnn}, "train_cnn");
    return train_classifier(split, recipe);
}

Network<float> pretrain_backbone(const LabeledDataset& aux, const ModelRecipe& recipe, std::vector<EpochRecord>* trace) {
    recipe.validate();
    if (aux.category_count() < 2) throw std::invalid_argument("pretrain_backbone: auxiliary set needs >= 2 categories");
    ModelRecipe r = recipe;
    r.kind = ModelKind::cnn;
    Network<float> net = build_classifier(image_shape(aux), r, aux.category_count());
    std::vector<EpochRecord> records = fit_classifier(net, aux, nullptr, r);
    if (trace) *trace = std::move(records);

    Network<float> backbone(net.input_shape());
    for (std::size_t i = 0; i < 3 * r.conv_channels.size(); ++i) backbone.add(net.layer(i).clone());
    return backbone;
}

TrainedModel transfer_train(const SplitDataset& split, const Network<float>& backbone, const ModelRecipe& recipe) {
    require_kind(recipe, {ModelKind::transfer}, "transfer_train");
    const LabeledDataset train = split.train_set();
    const LabeledDataset validation = split.validation_set();
    Network<float> net(image_shape(train));
    copy_layers(net, backbone, true);
    add_classifier_head(net, {}, split.parent->category_count());
    net.initialize(mix_seed(recipe.seed, 0), backbone.size());
    TrainedModel model{recipe, std::move(net), std::nullopt, {}};
    model.trace = fit_classifier(model.network, train, &validation, recipe);
    return model;
}

TrainedModel train_siamese(const SplitDataset& split, const ModelRecipe& r, const Network<float>* backbone) {
    require_kind(r, {ModelKind::siamese, ModelKind::siamese_transfer}, "train_siamese");
    if (r.kind == ModelKind::siamese_transfer && !backbone) {
        throw std::invalid_argument("train_siamese: siamese-transfer requires a pretrained backbone");
    }
    const LabeledDataset train = split.train_set();
    const LabeledDataset validation = split.validation_set();
    const std::size_t categories = split.parent->category_count();

    Network<float> net(image_shape(train));
    if (backbone) {
        copy_layers(net, *backbone, r.kind == ModelKind::siamese_transfer);
    } else {
        add_conv_blocks(net, r.conv_channels);
    }
    const std::size_t head = backbone ? backbone->size() : 0;
    net.add(make_flatten<float>());
    net.add(make_linear<float>(net.output_shape()[0], r.embedding_dim));
    net.initialize(mix_seed(r.seed, 0), head);

    const std::size_t first = net.frozen_prefix();
    const std::size_t last = net.size();
    const std::vector<std::size_t> labels = train.labels();
    const Tensor<float> features = infer_chunked(net, to_batch(train), 0, first);
    const Tensor<float> val_features = infer_chunked(net, to_batch(validation), 0, first);
    const std::vector<std::size_t> val_labels = validation.labels();

    OptimizerState<float> opt = make_optimizer(r);
    const std::size_t pair_count = static_cast<std::size_t>(r.pairs_per_sample) * train.size();
    std::vector<EpochRecord> trace;
    for (std::uint32_t epoch = 0; epoch < r.epochs; ++epoch) {
        const PairBatch pairs = sample_pairs(train, pair_count, r.positive_ratio, mix_seed(r.seed, 1000 + epoch));
        double total = 0.0;
        for (std::size_t start = 0; start < pair_count; start += r.batch_size) {
            const std::size_t b = std::min<std::size_t>(r.batch_size, pair_count - start);
            // Both members go through the one network as a single 2b batch.
            std::vector<std::size_t> idx(2 * b);
            std::vector<bool> same(b);
            for (std::size_t i = 0; i < b; ++i) {
                const SamplePair& p = pairs.pairs[start + i];
                idx[i] = p.first;
                idx[b + i] = p.second;
                same[i] = p.same;
            }
            const Tensor<float> out = net.forward(gather(features, idx), first, last);
            const std::size_t d = r.embedding_dim;
            Tensor<float> a({b, d}), c({b, d});
            std::memcpy(a.data(), out.data(), b * d * sizeof(float));
            std::memcpy(c.data(), out.data() + b * d, b * d * sizeof(float));
            const PairLossValue<float> lv = contrastive_loss(a, c, same, static_cast<float>(r.margin));
            check_finite(lv.loss, epoch);
            Tensor<float> grad(out.shape());
            std::memcpy(grad.data(), lv.grad_first.data(), b * d * sizeof(float));
            std::memcpy(grad.data() + b * d, lv.grad_second.data(), b * d * sizeof(float));
            net.backward(grad);
            optimize_step(net, opt);
            total += static_cast<double>(lv.loss) * static_cast<double>(b);
        }
        EpochRecord rec{total / static_cast<double>(pair_count), std::numeric_limits<double>::quiet_NaN()};
        if (!val_labels.empty()) {
            const Matrix protos =
                category_means(to_matrix(infer_chunked(net, features, first, last)), labels, categories);
            rec.validation_accuracy =
                accuracy(nearest_prototype(to_matrix(infer_chunked(net, val_features, first, last)), protos), val_labels);
        }
        trace.push_back(rec);
    }

    TrainedModel model{r, std::move(net), std::nullopt, std::move(trace)};
    model.prototypes = category_means(embed(model, train), labels, categories);
    return model;
}

TrainedModel train_model(const SplitDataset& split, const ModelRecipe& recipe, const Network<float>* backbone) {
    switch (recipe.kind) {
        case ModelKind::logistic_regression: return train_logistic_regression(split, recipe);
        case ModelKind::cnn: return train_cnn(split, recipe);
        case ModelKind::transfer:
            if (!backbone) throw std::invalid_argument("train_model: transfer requires a pretrained backbone");
            return transfer_train(split, *backbone, recipe);
        case ModelKind::siamese: return train_siamese(split, recipe, nullptr);
        case ModelKind::siamese_transfer: return train_siamese(split, recipe, backbone);
    }
    throw std::invalid_argument("train_model: unknown kind");
}

Matrix embed(const TrainedModel& model, const LabeledDataset& ds) {
    const Network<float>& net = model.network;
    const bool softmax_head = net.size() > 0 && net.layer(net.size() - 1).kind() == LayerKind::softmax;
    const std::size_t last = softmax_head ? net.size() - 1 : net.size();
    return to_matrix(infer_chunked(net, to_batch(ds), 0, last));
}

Matrix category_means(const Matrix& embeddings, const std::vector<std::size_t>& labels, std::size_t categories) {
    if (static_cast<std::size_t>(embeddings.rows()) != labels.size()) {
        throw std::invalid_argument("category_means: row count differs from label count");
    }
    Matrix means = Matrix::Zero(static_cast<Eigen::Index>(categories), embeddings.cols());
    std::vector<std::size_t> counts(categories, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        means.row(static_cast<Eigen::Index>(labels.at(i))) += embeddings.row(static_cast<Eigen::Index>(i));
        ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < categories; ++c) {
        if (counts[c] == 0) throw std::invalid_argument("category_means: category " + std::to_string(c) + " is empty");
        means.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
    }
    return means;
}

std::vector<std::size_t> nearest_prototype(const Matrix& embeddings, const Matrix& prototypes) {
    if (embeddings.cols() != prototypes.cols()) {
        throw std::invalid_argument("nearest_prototype: embedding and prototype dimensions differ");
    }
    std::vector<std::size_t> out(static_cast<std::size_t>(embeddings.rows()));
    for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < prototypes.rows(); ++c) {
            const double d = (embeddings.row(i) - prototypes.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(c);
            }
        }
    }
    return out;
}

std::vector<std::size_t> prototype_classify(const TrainedModel& model, const LabeledDataset& ds) {
    if (!model.prototypes) throw std::invalid_argument("prototype_classify: model has no prototypes");
    return nearest_prototype(embed(model, ds), *model.prototypes);
}

std::vector<std::size_t> evaluate(const TrainedModel& model, const LabeledDataset& ds) {
    if (is_siamese(model.recipe.kind)) return prototype_classify(model, ds);
    return row_argmax(infer_chunked(model.network, to_batch(ds), 0, model.network.size()));
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    std::vector<CheckpointBlock> blocks;
    const std::string recipe = model.recipe.to_text();
    blocks.push_back({"RCPE", std::vector<std::uint8_t>(recipe.begin(), recipe.end())});

    std::ostringstream trace;
    BinaryWriter tw(trace);
    tw.u32(static_cast<std::uint32_t>(model.trace.size()));
    for (const EpochRecord& e : model.trace) {
        tw.f64(e.loss);
        tw.f64(e.validation_accuracy);
    }
    const std::string tb = trace.str();
    blocks.push_back({"TRAC", std::vector<std::uint8_t>(tb.begin(), tb.end())});

    if (model.prototypes) {
        std::ostringstream protos;
        BinaryWriter pw(protos);
        pw.u32(static_cast<std::uint32_t>(model.prototypes->rows()));
        pw.u32(static_cast<std::uint32_t>(model.prototypes->cols()));
        for (Eigen::Index i = 0; i < model.prototypes->size(); ++i) pw.f64(model.prototypes->data()[i]);
        const std::string pb = protos.str();
        blocks.push_back({"PROT", std::vector<std::uint8_t>(pb.begin(), pb.end())});
    }
    save_network(path, model.network, blocks);
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::vector<CheckpointBlock> blocks;
    TrainedModel model{{}, load_network(path, &blocks), std::nullopt, {}};
    bool have_recipe = false;
    for (const CheckpointBlock& b : blocks) {
        const std::string bytes(b.payload.begin(), b.payload.end());
        std::istringstream is(bytes);
        BinaryReader reader(is, path.string());
        if (b.tag == "RCPE") {
            model.recipe = ModelRecipe::from_text(bytes);
            have_recipe = true;
        } else if (b.tag == "TRAC") {
            const std::uint32_t n = reader.u32();
            for (std::uint32_t i = 0; i < n; ++i) {
                EpochRecord e;
                e.loss = reader.f64();
                e.validation_accuracy = reader.f64();
                model.trace.push_back(e);
            }
        } else if (b.tag == "PROT") {
            const std::uint32_t rows = reader.u32(), cols = reader.u32();
            Matrix p(rows, cols);
            for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = reader.f64();
            model.prototypes = std::move(p);
        }
    }
    if (!have_recipe) throw std::runtime_error(path.string() + ": checkpoint has no model recipe block");
    if (is_siamese(model.recipe.kind) != model.prototypes.has_value()) {
        throw std::runtime_error(path.string() + ": prototype block does not match model kind");
    }
    return model;
}

}  // namespace fsem

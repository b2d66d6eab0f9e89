#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsem/dataset.hpp"
#include "fsem/matrix.hpp"
#include "fsem/network.hpp"

namespace fsem {

enum class ModelKind {
    logistic_regression,
    cnn,
    transfer,
    siamese,
    siamese_transfer,
};

/// "logistic-regression", "cnn", "transfer", "siamese", "siamese-transfer".
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
bool is_siamese(ModelKind kind);

struct ModelRecipe {
    ModelKind kind = ModelKind::cnn;

    /// Output channels of each conv -> relu -> max-pool block (3x3 kernels,
    /// padding 1, 2x2 pooling).
    std::vector<std::uint32_t> conv_channels{8, 8, 16, 16, 32};
    /// Hidden widths of the classifier's linear stack; one more linear layer
    /// maps to the category count.
    std::vector<std::uint32_t> hidden_widths{64, 32, 32, 16};
    std::uint32_t embedding_dim = 16;

    std::uint32_t epochs = 50;
    std::uint32_t batch_size = 32;
    double learning_rate = 0.01;
    double momentum = 0.9;
    double margin = 1.0;
    /// Pairs sampled per epoch, as a multiple of the training-set size.
    std::uint32_t pairs_per_sample = 10;
    double positive_ratio = 0.5;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on non-positive hyperparameters or an
    /// embedding dimension below 2 for siamese kinds.
    void validate() const;

    /// key=value lines, one per field, in a fixed order.
    std::string to_text() const;
    static ModelRecipe from_text(std::string_view text);

    bool operator==(const ModelRecipe&) const = default;
};

struct EpochRecord {
    double loss = 0.0;
    double validation_accuracy = 0.0;  ///< NaN when there is no validation set

    bool operator==(const EpochRecord&) const = default;
};

struct TrainedModel {
    ModelRecipe recipe;
    Network<float> network;
    std::optional<Matrix> prototypes;  ///< [categories x embedding_dim], siamese kinds only
    std::vector<EpochRecord> trace;
};

TrainedModel train_logistic_regression(const SplitDataset& split, const ModelRecipe& recipe);
TrainedModel train_cnn(const SplitDataset& split, const ModelRecipe& recipe);

/// Trains a CNN classifier on aux and returns its convolutional blocks only.
Network<float> pretrain_backbone(const LabeledDataset& aux, const ModelRecipe& recipe,
                                 std::vector<EpochRecord>* trace = nullptr);

/// Frozen copy of backbone, then flatten -> linear -> softmax; only the head
/// is trained.
TrainedModel transfer_train(const SplitDataset& split, const Network<float>& backbone, const ModelRecipe& recipe);

/// Shared-weight pair training with the contrastive loss. A backbone, when
/// given, replaces the randomly initialised convolutional stack; for
/// siamese-transfer it is also frozen (and required).
TrainedModel train_siamese(const SplitDataset& split, const ModelRecipe& recipe,
                           const Network<float>* backbone = nullptr);

/// Dispatches on recipe.kind. transfer and siamese-transfer need a backbone.
TrainedModel train_model(const SplitDataset& split, const ModelRecipe& recipe,
                         const Network<float>* backbone = nullptr);

/// Row i embeds sample i: the pre-softmax activation for classifiers, the
/// embedding head for siamese kinds.
Matrix embed(const TrainedModel& model, const LabeledDataset& ds);

/// Nearest prototype by Euclidean distance; ties go to the lower category.
std::vector<std::size_t> prototype_classify(const TrainedModel& model, const LabeledDataset& ds);
std::vector<std::size_t> nearest_prototype(const Matrix& embeddings, const Matrix& prototypes);

/// Softmax argmax for classifiers, prototype_classify for siamese kinds.
std::vector<std::size_t> evaluate(const TrainedModel& model, const LabeledDataset& ds);

/// Per-category means of the rows of embeddings.
Matrix category_means(const Matrix& embeddings, const std::vector<std::size_t>& labels, std::size_t categories);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace fsem

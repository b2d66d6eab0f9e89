#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsem/models.hpp"
#include "fsem/sampling.hpp"
#include "fsem/synthetic.hpp"
#include "fsem/transform.hpp"
#include "fsem/unsupervised.hpp"

namespace fsem {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class DataSource { synthetic, directory };

struct DatasetConfig {
    DataSource source = DataSource::synthetic;
    std::filesystem::path path;  ///< directory sources only
    SyntheticSpec synthetic;
    std::optional<std::uint64_t> seed;
};

struct PreprocessConfig {
    std::size_t image_size = 32;  ///< square resize target
    double expand_fraction = 0.1;
    AugmentParams augment;        ///< its seed field is ignored; see seed below
    SplitRatios ratios;
    std::optional<std::uint64_t> seed;
};

/// Auxiliary task used to pretrain the backbone of transfer and
/// siamese-transfer blocks.
struct PretrainConfig {
    DataSource source = DataSource::synthetic;
    std::filesystem::path path;
    SyntheticSpec synthetic;  ///< defaults to the auxiliary kinds, 200 per category
    ModelRecipe recipe;       ///< kind is forced to cnn
    std::optional<std::uint64_t> seed;

    PretrainConfig();
};

struct ModelBlock {
    std::string name;
    ModelRecipe recipe;
    bool explicit_seed = false;
};

struct ClusteringConfig {
    std::size_t k = 0;  ///< 0 means the category count
    bool kmeans = true;
    bool gmm = true;
    KMeansInit kmeans_init = KMeansInit::plus_plus;
    std::size_t kmeans_restarts = 10;
    std::size_t kmeans_max_iterations = 300;
    std::size_t gmm_max_iterations = 200;
    double gmm_tolerance = 1e-6;
    /// "pixels" or a model block name: what feeds the PCA+t-SNE pipeline.
    std::string pca_source = "pixels";
    std::size_t pca_dims = kDefaultPcaDims;
    TsneParams tsne;  ///< perplexity is capped to the point count at run time
    std::optional<std::uint64_t> seed;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::filesystem::path output = "fsem-run";
    DatasetConfig dataset;
    PreprocessConfig preprocess;
    PretrainConfig pretrain;
    std::vector<ModelBlock> models;
    ClusteringConfig clustering;

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;

    /// Canonical INI text; parse_config(to_text()) reproduces the config.
    std::string to_text() const;

    // Seeds of the stochastic stages: the explicit value when set, otherwise
    // derived from `seed`.
    std::uint64_t dataset_seed() const;
    std::uint64_t preprocess_seed() const;
    std::uint64_t pretrain_seed() const;
    std::uint64_t clustering_seed() const;
    std::uint64_t model_seed(std::size_t block) const;

    bool needs_backbone() const;
};

/// INI with sections [experiment], [dataset], [preprocess], [pretrain],
/// [clustering] and one [model.<name>] per model block (in file order).
/// Unknown sections or keys are errors. Relative dataset paths resolve
/// against `base`.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Name used for the PCA+t-SNE row in reports and its artifact files.
inline constexpr const char* kPcaTsneName = "pca+tsne";
inline constexpr const char* kPcaTsneFile = "pca_tsne";

enum class Stage { synth, ingest, train, embed, cluster, evaluate, report, visualize };

std::string to_string(Stage stage);
Stage parse_stage(std::string_view name);
/// Every stage, in pipeline order.
const std::vector<Stage>& all_stages();

/// Stage failure; what() names the stage and the cause.
class StageError : public std::runtime_error {
public:
    StageError(Stage stage, const std::string& cause);
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

struct ManifestArtifact {
    std::string path;    ///< relative to the output directory, '/' separated
    std::string sha256;  ///< lowercase hex
};

struct RunManifest {
    std::string toolkit_version = kToolkitVersion;
    std::string config_sha256;
    std::vector<std::pair<std::string, double>> stage_seconds;  ///< pipeline order
    std::vector<ManifestArtifact> artifacts;                    ///< sorted by path

    std::string to_text() const;
    static RunManifest from_text(std::string_view text);
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Runs one stage against config.output, reading the artifacts earlier
/// stages left there, then rewrites manifest.txt. Partial artifacts stay on
/// failure.
RunManifest run_stage(const ExperimentConfig& config, Stage stage);

/// Every stage in order (synth only when something is synthetic).
RunManifest run_experiment(const ExperimentConfig& config);

RunManifest read_manifest(const std::filesystem::path& output);

/// Artifacts whose file is missing or whose hash differs from the manifest.
std::vector<std::string> verify_manifest(const std::filesystem::path& output);

}  // namespace fsem

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fsem/matrix.hpp"

namespace fsem {

// ---------------------------------------------------------------- PCA

struct PcaModel {
    Vector mean;                 ///< [D]
    Matrix components;           ///< [D x k], orthonormal columns
    Vector explained_variance;   ///< [k], non-increasing
};

inline constexpr std::size_t kDefaultPcaDims = 180;

/// Largest valid component count not above `requested`: min(requested, N-1, D).
std::size_t pca_dims(std::size_t requested, std::size_t rows, std::size_t cols);

/// Top-k right singular directions of the mean-centred data. Each component
/// is sign-normalised so its largest-magnitude entry is positive.
PcaModel pca_fit(const Matrix& x, std::size_t k);
Matrix pca_transform(const PcaModel& model, const Matrix& x);

// ---------------------------------------------------------------- t-SNE

struct TsneParams {
    std::size_t out_dims = 2;
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    std::size_t momentum_switch = 250;
    double perplexity_tolerance = 1e-4;
    std::uint64_t seed = 0;
};

struct TsneResult {
    Matrix layout;                             ///< [N x out_dims]
    std::vector<double> kl_trace;              ///< KL(P || Q) after each iteration
    std::vector<double> realized_perplexity;   ///< per point
};

/// Largest perplexity the point count admits: min(requested, (N-1)/3), kept
/// strictly below the bound.
double tsne_perplexity_cap(double requested, std::size_t points);

/// Exact (all pairs) t-SNE. Throws when N < 5 or perplexity >= (N-1)/3.
TsneResult tsne(const Matrix& x, const TsneParams& params);

// ---------------------------------------------------------------- clustering

enum class KMeansInit { random_points, plus_plus };

struct KMeansParams {
    std::size_t k = 2;
    KMeansInit init = KMeansInit::random_points;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 300;
    std::size_t restarts = 1;
};

struct ClusteringResult {
    std::vector<std::size_t> assignments;   ///< [N]
    Matrix centroids;                       ///< K-Means centroids or GMM means, [K x d]
    Vector weights;                         ///< GMM only, [K]
    Matrix variances;                       ///< GMM only, [K x d]
    Matrix responsibilities;                ///< GMM only, [N x K]
    std::vector<double> objective_trace;    ///< WCSS per iteration, or log-likelihood
    std::size_t iterations = 0;
    bool converged = false;
};

/// Lloyd iterations until assignments stop changing. An emptied cluster is
/// re-seeded at the point farthest from its assigned centroid. With several
/// restarts the lowest final WCSS wins (earliest on ties).
ClusteringResult kmeans(const Matrix& x, const KMeansParams& params);

/// Lloyd iterations from the given centroids (one run, no restarts).
ClusteringResult kmeans_from(const Matrix& x, const Matrix& initial_centroids, std::size_t max_iterations = 300);

double wcss(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& centroids);

struct GmmParams {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 200;
    double tolerance = 1e-6;
    double variance_floor = 1e-6;
};

/// Diagonal-covariance Gaussian mixture fitted by EM from a seeded K-Means
/// start. The trace holds the log-likelihood under the starting parameters
/// followed by one entry per M step. Stops once an M step improves it by
/// less than tolerance * max(1, |log-likelihood|).
ClusteringResult gmm_fit(const Matrix& x, const GmmParams& params);

/// Argmax responsibility per row; ties go to the lower component.
std::vector<std::size_t> gmm_assign(const ClusteringResult& result);
std::vector<std::size_t> gmm_assign(const Matrix& responsibilities);

double gmm_log_likelihood(const Matrix& x, const Vector& weights, const Matrix& means, const Matrix& variances);

/// CSV with header "index,x0,...,x{d-1},assignment".
void write_points_csv(const std::filesystem::path& path, const Matrix& points,
                      const std::vector<std::size_t>& assignments);

}  // namespace fsem

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsem/matrix.hpp"

namespace fsem {

/// counts(i, j): samples of true category i predicted as j.
struct ConfusionMatrix {
    std::size_t categories = 0;
    std::vector<std::uint64_t> counts;  ///< row-major [categories x categories]

    std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts.at(truth * categories + predicted); }
    std::uint64_t total() const;
    std::uint64_t trace() const;

    bool operator==(const ConfusionMatrix&) const = default;
};

/// Per-category one-vs-rest precision, recall and F1, plus unweighted
/// (macro) means. An undefined ratio (zero denominator) is reported as 0 and
/// counted in undefined_metrics.
struct ClassificationReport {
    double accuracy = 0.0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::size_t undefined_metrics = 0;
};

ConfusionMatrix confusion_matrix(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& predicted,
                                 std::size_t categories);

ClassificationReport classification_report(const ConfusionMatrix& cm);

/// Mean silhouette over all points, Euclidean distances. Points in a
/// singleton cluster score 0. Requires 2 <= distinct labels <= N - 1.
double silhouette_score(const Matrix& x, const std::vector<std::size_t>& labels);

struct ClassificationRow {
    std::string model;
    ClassificationReport report;
};

struct ClusteringRow {
    std::string model;
    double kmeans = 0.0;
    double gmm = 0.0;
};

/// Columns: Model, Accuracy, Precision, Recall, F1-score (macro averages).
std::string classification_table_csv(const std::vector<ClassificationRow>& rows);
std::string classification_table_markdown(const std::vector<ClassificationRow>& rows);

/// Columns: Model, K-Means, GMM (silhouette scores).
std::string clustering_table_csv(const std::vector<ClusteringRow>& rows);
std::string clustering_table_markdown(const std::vector<ClusteringRow>& rows);

}  // namespace fsem

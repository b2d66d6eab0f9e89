#include "fsem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace fsem {

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

double ratio(std::uint64_t num, std::uint64_t den, std::size_t& undefined) {
    if (den == 0) {
        ++undefined;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Left-aligned first column, right-aligned numeric columns, padded to width.
std::string markdown(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& body) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = std::max<std::size_t>(header[c].size(), 3);
        for (const auto& row : body) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out = "|";
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string pad(width[c] - cells[c].size(), ' ');
            out += " " + (c == 0 ? cells[c] + pad : pad + cells[c]) + " |";
        }
        return out + "\n";
    };
    std::string out = line(header) + "|";
    for (std::size_t c = 0; c < header.size(); ++c) {
        out += c == 0 ? " :" + std::string(width[c] - 1, '-') + " |" : " " + std::string(width[c] - 1, '-') + ": |";
    }
    out += "\n";
    for (const auto& row : body) out += line(row);
    return out;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& body) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) out += (c ? "," : "") + cells[c];
        out += "\n";
    };
    line(header);
    for (const auto& row : body) line(row);
    return out;
}

const std::vector<std::string> kClassificationHeader{"Model", "Accuracy", "Precision", "Recall", "F1-score"};
const std::vector<std::string> kClusteringHeader{"Model", "K-Means", "GMM"};

std::vector<std::vector<std::string>> classification_body(const std::vector<ClassificationRow>& rows) {
    std::vector<std::vector<std::string>> body;
    for (const auto& r : rows) {
        body.push_back({r.model, fixed4(r.report.accuracy), fixed4(r.report.macro_precision),
                        fixed4(r.report.macro_recall), fixed4(r.report.macro_f1)});
    }
    return body;
}

std::vector<std::vector<std::string>> clustering_body(const std::vector<ClusteringRow>& rows) {
    std::vector<std::vector<std::string>> body;
    for (const auto& r : rows) body.push_back({r.model, fixed4(r.kmeans), fixed4(r.gmm)});
    return body;
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (std::uint64_t v : counts) t += v;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t t = 0;
    for (std::size_t c = 0; c < categories; ++c) t += at(c, c);
    return t;
}

ConfusionMatrix confusion_matrix(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& predicted,
                                 std::size_t categories) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("confusion_matrix: " + std::to_string(truth.size()) + " true labels but " +
                                    std::to_string(predicted.size()) + " predictions");
    }
    if (truth.empty()) throw std::invalid_argument("confusion_matrix: no samples");
    if (categories == 0) throw std::invalid_argument("confusion_matrix: zero categories");
    ConfusionMatrix cm{categories, std::vector<std::uint64_t>(categories * categories, 0)};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= categories || predicted[i] >= categories) {
            throw std::out_of_range("confusion_matrix: label out of range at sample " + std::to_string(i));
        }
        ++cm.counts[truth[i] * categories + predicted[i]];
    }
    return cm;
}

ClassificationReport classification_report(const ConfusionMatrix& cm) {
    const std::size_t c = cm.categories;
    if (c == 0 || cm.counts.size() != c * c || cm.total() == 0) {
        throw std::invalid_argument("classification_report: empty confusion matrix");
    }
    ClassificationReport r;
    r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
    for (std::size_t k = 0; k < c; ++k) {
        std::uint64_t predicted_k = 0, actual_k = 0;
        for (std::size_t j = 0; j < c; ++j) {
            predicted_k += cm.at(j, k);
            actual_k += cm.at(k, j);
        }
        const std::uint64_t tp = cm.at(k, k);
        const double p = ratio(tp, predicted_k, r.undefined_metrics);
        const double rc = ratio(tp, actual_k, r.undefined_metrics);
        double f = 0.0;
        if (p + rc > 0.0) {
            f = 2.0 * p * rc / (p + rc);
        } else {
            ++r.undefined_metrics;
        }
        r.precision.push_back(p);
        r.recall.push_back(rc);
        r.f1.push_back(f);
    }
    r.macro_precision = mean(r.precision);
    r.macro_recall = mean(r.recall);
    r.macro_f1 = mean(r.f1);
    return r;
}

double silhouette_score(const Matrix& x, const std::vector<std::size_t>& labels) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (labels.size() != n) throw std::invalid_argument("silhouette_score: label count differs from row count");
    std::map<std::size_t, std::size_t> index;
    for (std::size_t l : labels) index.emplace(l, 0);
    const std::size_t k = index.size();
    if (k < 2 || k + 1 > n) {
        throw std::invalid_argument("silhouette_score: need 2 <= clusters <= N - 1, got " + std::to_string(k) +
                                    " clusters for " + std::to_string(n) + " points");
    }
    std::size_t next = 0;
    for (auto& [label, idx] : index) idx = next++;
    std::vector<std::size_t> cluster(n), size(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cluster[i] = index[labels[i]];
        ++size[cluster[i]];
    }

    double total = 0.0;
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[cluster[j]] += (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).norm();
        }
        const std::size_t own = cluster[i];
        if (size[own] == 1) continue;  // contributes 0
        const double a = sums[own] / static_cast<double>(size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(size[c]));
        }
        const double m = std::max(a, b);
        total += m > 0.0 ? (b - a) / m : 0.0;
    }
    return total / static_cast<double>(n);
}

std::string classification_table_csv(const std::vector<ClassificationRow>& rows) {
    return csv(kClassificationHeader, classification_body(rows));
}

std::string classification_table_markdown(const std::vector<ClassificationRow>& rows) {
    return markdown(kClassificationHeader, classification_body(rows));
}

std::string clustering_table_csv(const std::vector<ClusteringRow>& rows) {
    return csv(kClusteringHeader, clustering_body(rows));
}

std::string clustering_table_markdown(const std::vector<ClusteringRow>& rows) {
    return markdown(kClusteringHeader, clustering_body(rows));
}

}  // namespace fsem

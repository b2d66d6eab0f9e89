#pragma once

// Deliberately naive reference computations used to cross-check the library.

#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <vector>

#include "fsem/matrix.hpp"

namespace oracle {

struct Report {
    double accuracy = 0;
    std::vector<double> precision, recall, f1;
    double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
};

// Counts TP/FP/FN straight from the label lists, one category at a time.
inline Report counting_report(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& pred,
                              std::size_t categories) {
    Report r;
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == pred[i];
    r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    for (std::size_t c = 0; c < categories; ++c) {
        std::uint64_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (pred[i] == c && truth[i] == c) ++tp;
            if (pred[i] == c && truth[i] != c) ++fp;
            if (pred[i] != c && truth[i] == c) ++fn;
        }
        const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        const double q = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        r.precision.push_back(p);
        r.recall.push_back(q);
        r.f1.push_back(p + q > 0 ? 2 * p * q / (p + q) : 0.0);
    }
    for (std::size_t c = 0; c < categories; ++c) {
        r.macro_precision += r.precision[c];
        r.macro_recall += r.recall[c];
        r.macro_f1 += r.f1[c];
    }
    r.macro_precision /= static_cast<double>(categories);
    r.macro_recall /= static_cast<double>(categories);
    r.macro_f1 /= static_cast<double>(categories);
    return r;
}

// Per-point silhouette with explicit loops over every pair.
inline double silhouette(const fsem::Matrix& x, const std::vector<std::size_t>& labels) {
    const std::size_t n = labels.size();
    std::set<std::size_t> clusters(labels.begin(), labels.end());
    auto dist = [&](std::size_t i, std::size_t j) {
        double s = 0;
        for (Eigen::Index d = 0; d < x.cols(); ++d) {
            const double diff = x(static_cast<Eigen::Index>(i), d) - x(static_cast<Eigen::Index>(j), d);
            s += diff * diff;
        }
        return std::sqrt(s);
    };
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double own_sum = 0;
        std::size_t own_n = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && labels[j] == labels[i]) {
                own_sum += dist(i, j);
                ++own_n;
            }
        }
        if (own_n == 0) continue;
        const double a = own_sum / static_cast<double>(own_n);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c : clusters) {
            if (c == labels[i]) continue;
            double s = 0;
            std::size_t m = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] == c) {
                    s += dist(i, j);
                    ++m;
                }
            }
            b = std::min(b, s / static_cast<double>(m));
        }
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

// Minimum WCSS over every 2-partition with both parts non-empty.
inline double best_two_partition_wcss(const fsem::Matrix& x) {
    const std::size_t n = static_cast<std::size_t>(x.rows());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        if (mask & 1) continue;  // each partition once: point 0 always in part 0
        double total = 0;
        for (int part = 0; part < 2; ++part) {
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
            std::size_t m = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (((mask >> i) & 1) == static_cast<std::size_t>(part)) {
                    mean += x.row(static_cast<Eigen::Index>(i));
                    ++m;
                }
            }
            mean /= static_cast<double>(m);
            for (std::size_t i = 0; i < n; ++i) {
                if (((mask >> i) & 1) == static_cast<std::size_t>(part)) {
                    total += (x.row(static_cast<Eigen::Index>(i)) - mean).squaredNorm();
                }
            }
        }
        best = std::min(best, total);
    }
    return best;
}

}  // namespace oracle

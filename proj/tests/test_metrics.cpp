#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fsem/metrics.hpp"
#include "fsem/rng.hpp"
#include "oracles.hpp"

using namespace fsem;

TEST_CASE("confusion matrix examples") {
    const std::vector<std::size_t> t{0, 1, 2, 1, 0};
    const auto diag = confusion_matrix(t, t, 3);
    CHECK(diag.counts == std::vector<std::uint64_t>{2, 0, 0, 0, 2, 0, 0, 0, 1});

    const auto cm = confusion_matrix({0, 0, 1, 2}, {0, 1, 1, 2}, 3);
    CHECK(cm.counts == std::vector<std::uint64_t>{1, 1, 0, 0, 1, 0, 0, 0, 1});
    CHECK(cm.total() == 4);
    CHECK(cm.trace() == 3);

    CHECK_THROWS_AS(confusion_matrix({}, {}, 3), std::invalid_argument);
    CHECK_THROWS_AS(confusion_matrix({0, 1}, {0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(confusion_matrix({0, 3}, {0, 1}, 3), std::out_of_range);
}

TEST_CASE("classification report examples") {
    const auto r = classification_report(confusion_matrix({0, 0, 1, 2}, {0, 1, 1, 2}, 3));
    CHECK(r.accuracy == 0.75);
    CHECK(r.precision == std::vector<double>{1.0, 0.5, 1.0});
    CHECK(r.recall == std::vector<double>{0.5, 1.0, 1.0});
    CHECK(r.f1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(r.macro_precision == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(r.macro_recall == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(r.macro_f1 == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
    CHECK(r.undefined_metrics == 0);

    const std::vector<std::size_t> t{0, 1, 2, 2};
    const auto perfect = classification_report(confusion_matrix(t, t, 3));
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.macro_precision == 1.0);
    CHECK(perfect.macro_recall == 1.0);
    CHECK(perfect.macro_f1 == 1.0);

    const auto single = classification_report(confusion_matrix({0, 0, 0}, {0, 0, 0}, 1));
    CHECK(single.precision[0] == 1.0);
    CHECK(single.recall[0] == 1.0);
    CHECK(single.f1[0] == 1.0);

    // category 2 never predicted and never present
    const auto gap = classification_report(confusion_matrix({0, 1}, {0, 1}, 3));
    CHECK(gap.precision[2] == 0.0);
    CHECK(gap.recall[2] == 0.0);
    CHECK(gap.f1[2] == 0.0);
    CHECK(gap.undefined_metrics == 3);

    CHECK_THROWS_AS(classification_report(ConfusionMatrix{}), std::invalid_argument);
    CHECK_THROWS_AS(classification_report(ConfusionMatrix{2, {0, 0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("report matches the counting oracle on random instances") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t c = 1 + rng.below(6);
        const std::size_t n = 1 + rng.below(60);
        std::vector<std::size_t> truth(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = rng.below(c);
            pred[i] = rng.uniform() < 0.6 ? truth[i] : rng.below(c);
        }
        const auto cm = confusion_matrix(truth, pred, c);
        const auto r = classification_report(cm);
        const auto o = oracle::counting_report(truth, pred, c);
        CHECK(r.accuracy == o.accuracy);
        CHECK(r.precision == o.precision);
        CHECK(r.recall == o.recall);
        CHECK(r.f1 == o.f1);
        CHECK(r.macro_precision == o.macro_precision);
        CHECK(r.macro_recall == o.macro_recall);
        CHECK(r.macro_f1 == o.macro_f1);
        CHECK(cm.total() == n);
        // accuracy is the rational trace / total
        CHECK(r.accuracy == static_cast<double>(cm.trace()) / static_cast<double>(n));
        CHECK(std::llround(r.accuracy * static_cast<double>(n)) == static_cast<long long>(cm.trace()));
    }
}

TEST_CASE("silhouette examples") {
    Matrix dup(4, 2);
    dup << 0, 0, 0, 0, 5, 5, 5, 5;
    CHECK(silhouette_score(dup, {0, 0, 1, 1}) == 1.0);

    Matrix four(4, 2);
    four << 0, 0, 0, 1, 10, 0, 10, 1;
    const double b = (10.0 + std::sqrt(101.0)) / 2.0;
    const double expected = (b - 1.0) / b;
    CHECK(silhouette_score(four, {0, 0, 1, 1}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(silhouette_score(four, {0, 0, 1, 1}) - 0.9003) < 1e-4);

    CHECK_THROWS_AS(silhouette_score(four, {0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(silhouette_score(four, {0, 1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(silhouette_score(four, {0, 1}), std::invalid_argument);

    // label values need not be contiguous; singleton clusters contribute 0
    Matrix five(5, 1);
    five << 0, 0.1, 5, 5.1, 40;
    const double s = silhouette_score(five, {7, 7, 2, 2, 9});
    CHECK(s == doctest::Approx(oracle::silhouette(five, {7, 7, 2, 2, 9})).epsilon(1e-12));
}

TEST_CASE("silhouette properties") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng.below(30), d = 1 + rng.below(4);
        const std::size_t k = 2 + rng.below(std::min<std::size_t>(4, n - 2));
        Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng.below(k);

        const double s = silhouette_score(x, labels);
        CHECK(std::abs(s - oracle::silhouette(x, labels)) < 1e-9);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);

        Matrix moved = x;
        moved.rowwise() += Eigen::RowVectorXd::Constant(static_cast<Eigen::Index>(d), 3.5);
        CHECK(std::abs(silhouette_score(moved, labels) - s) < 1e-9);
        CHECK(std::abs(silhouette_score(x * 7.25, labels) - s) < 1e-9);
        if (d >= 2) {
            Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            const double a = rng.uniform(0.0, 6.0);
            rot(0, 0) = std::cos(a);
            rot(0, 1) = -std::sin(a);
            rot(1, 0) = std::sin(a);
            rot(1, 1) = std::cos(a);
            const Matrix turned = x * rot;
            CHECK(std::abs(silhouette_score(turned, labels) - s) < 1e-9);
        }
    }
}

TEST_CASE("report tables") {
    ClassificationRow row{"cnn", classification_report(confusion_matrix({0, 0, 1, 2}, {0, 1, 1, 2}, 3))};
    const std::string csv = classification_table_csv({row});
    CHECK(csv == "Model,Accuracy,Precision,Recall,F1-score\ncnn,0.7500,0.8333,0.8333,0.7778\n");
    const std::string md = classification_table_markdown({row});
    CHECK(md.find("| Model | Accuracy | Precision | Recall | F1-score |") == 0);
    CHECK(md.find("| cnn   |   0.7500 |    0.8333 | 0.8333 |   0.7778 |") != std::string::npos);

    const std::string c2 = clustering_table_csv({{"pca+tsne", 0.5, 0.25}});
    CHECK(c2 == "Model,K-Means,GMM\npca+tsne,0.5000,0.2500\n");
    CHECK(clustering_table_markdown({{"lr", 0.1, 0.2}}).find("| Model | K-Means |    GMM |") == 0);
}

// Acceptance checks: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   acceptance [work-dir]
//
// The benchmark criteria run configs/shapes.ini under five seeds inside
// work-dir (default: ./acceptance-work).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fsem/experiment.hpp"
#include "fsem/gradcheck.hpp"
#include "fsem/image_io.hpp"
#include "fsem/loss.hpp"
#include "fsem/metrics.hpp"
#include "fsem/models.hpp"
#include "fsem/rng.hpp"
#include "fsem/sampling.hpp"
#include "fsem/synthetic.hpp"
#include "fsem/unsupervised.hpp"
#include "oracles.hpp"

#ifndef FSEM_SOURCE_DIR
#error "FSEM_SOURCE_DIR must point at the source tree"
#endif

using namespace fsem;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail.clear();
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Matrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    return x;
}

Tensor<double> random_input(Shape shape, std::uint64_t seed, double lo, double hi) {
    Tensor<double> t(std::move(shape));
    Rng rng(seed);
    for (double& v : t.values()) v = rng.uniform(lo, hi);
    return t;
}

// Smallest |pre-activation| feeding a ReLU.
double relu_margin(Network<double>& net, const Tensor<double>& x) {
    net.forward(x);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < net.size(); ++i) {
        if (net.layer(i).kind() != LayerKind::relu) continue;
        for (double v : net.activation(i - 1).values()) margin = std::min(margin, std::abs(v));
    }
    return margin;
}

// Input with the widest ReLU margin among a few candidates, so central
// differences do not straddle a kink.
Tensor<double> kink_free_input(Network<double>& net, Shape shape, std::uint64_t seed) {
    Tensor<double> best;
    double best_margin = -1;
    for (std::uint64_t s = seed; s < seed + 200; ++s) {
        Tensor<double> x = random_input(shape, s, 0.0, 1.0);
        const double m = relu_margin(net, x);
        if (m > best_margin) {
            best_margin = m;
            best = std::move(x);
        }
        if (best_margin > 1e-3) break;
    }
    return best;
}

// ------------------------------------------------------------ criterion 1

LabeledDataset tiny_images(const std::vector<std::string>& kinds, std::uint64_t seed) {
    SyntheticSpec s;
    s.kinds = kinds;
    s.per_category = 8;
    return generate_synthetic(s, seed);
}

ModelRecipe tiny_recipe(ModelKind kind) {
    ModelRecipe r;
    r.kind = kind;
    r.conv_channels = {4, 4, 4, 4, 4};
    r.hidden_widths = {8, 8, 8, 8};
    r.embedding_dim = 3;
    r.epochs = 1;
    r.batch_size = 8;
    r.pairs_per_sample = 1;
    r.seed = 17;
    return r;
}

// Contrastive loss of stacked pairs: rows [0, P) are first members, rows
// [P, 2P) second members, run through one network so the weights are shared.
Objective pair_objective(std::vector<bool> same, double margin) {
    return [same = std::move(same), margin](const Tensor<double>& out) {
        const std::size_t pairs = same.size(), d = out.shape()[1];
        Tensor<double> a({pairs, d}), b({pairs, d});
        for (std::size_t i = 0; i < pairs * d; ++i) {
            a.values()[i] = out.values()[i];
            b.values()[i] = out.values()[pairs * d + i];
        }
        const PairLossValue<double> v = contrastive_loss(a, b, same, margin);
        LossValue<double> r;
        r.loss = v.loss;
        r.grad = Tensor<double>(out.shape());
        for (std::size_t i = 0; i < pairs * d; ++i) {
            r.grad.values()[i] = v.grad_first.values()[i];
            r.grad.values()[pairs * d + i] = v.grad_second.values()[i];
        }
        return r;
    };
}

Outcome criterion_gradients() {
    Outcome o;
    const auto start = Clock::now();
    double worst = 0;
    auto record = [&](const std::string& what, const GradCheckReport& r) {
        worst = std::max(worst, r.max_relative_error);
        if (!(r.max_relative_error < 1e-4)) o.fail(what + " " + fmt("%.3g", r.max_relative_error));
    };

    // every layer kind in small standalone networks
    {
        Network<double> net({2, 6, 6});
        net.add(make_convolution<double>(2, 3, 3, 1, 1));
        net.add(make_relu<double>());
        net.add(make_max_pool<double>(2));
        net.add(make_convolution<double>(3, 2, 3, 2, 0));
        net.add(make_sigmoid<double>());
        net.add(make_flatten<double>());
        net.add(make_linear<double>(2, 4));
        net.add(make_softmax<double>());
        net.initialize(3);
        const std::vector<std::size_t> labels{0, 3, 1};
        const Tensor<double> x = kink_free_input(net, {3, 2, 6, 6}, 40);
        record("layer kinds", grad_check(net, x, labels));
        // the same stack under an arbitrary smooth objective of the output
        const Objective squares = [](const Tensor<double>& out) {
            LossValue<double> v;
            v.grad = Tensor<double>(out.shape());
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double w = 0.5 + 0.1 * static_cast<double>(i);
                v.loss += w * out.values()[i] * out.values()[i];
                v.grad.values()[i] = 2 * w * out.values()[i];
            }
            return v;
        };
        record("softmax output", grad_check(net, x, squares));
    }

    // cross-entropy networks with the shapes of the classifier families
    const SplitDataset sp = split(std::make_shared<const LabeledDataset>(tiny_images(default_target_kinds(), 3)),
                                  SplitRatios{}, 5);
    const std::vector<std::size_t> labels{0, 1, 2, 1};
    const Shape in{4, 1, 32, 32};
    for (ModelKind kind : {ModelKind::logistic_regression, ModelKind::cnn}) {
        Network<double> net = train_model(sp, tiny_recipe(kind)).network.cast<double>();
        record(to_string(kind), grad_check(net, kink_free_input(net, in, 60), labels));
    }
    ModelRecipe pre = tiny_recipe(ModelKind::cnn);
    const Network<float> backbone = pretrain_backbone(tiny_images(default_auxiliary_kinds(), 4), pre);
    {
        Network<double> net = train_model(sp, tiny_recipe(ModelKind::transfer), &backbone).network.cast<double>();
        record("transfer", grad_check(net, kink_free_input(net, in, 80), labels));
    }

    // siamese pair loss through shared weights, same and different pairs,
    // inside and outside the margin
    for (ModelKind kind : {ModelKind::siamese, ModelKind::siamese_transfer}) {
        const Network<float>* bb = kind == ModelKind::siamese_transfer ? &backbone : nullptr;
        Network<double> net = train_model(sp, tiny_recipe(kind), bb).network.cast<double>();
        const std::vector<bool> same{true, false, true, false};
        const Tensor<double> x = kink_free_input(net, {8, 1, 32, 32}, 100);
        const Tensor<double> out = net.infer(x);
        double mean_d = 0;
        for (std::size_t p = 0; p < 4; ++p) {
            double s = 0;
            for (std::size_t j = 0; j < 3; ++j) {
                const double diff = out.values()[p * 3 + j] - out.values()[(p + 4) * 3 + j];
                s += diff * diff;
            }
            mean_d += std::sqrt(s) / 4;
        }
        // margin near the typical distance so some negatives are active
        record(to_string(kind) + " pairs", grad_check(net, x, pair_objective(same, std::max(mean_d, 1e-3) * 1.3)));
        record(to_string(kind) + " pairs, small margin", grad_check(net, x, pair_objective(same, mean_d * 0.5)));
    }
    const double secs = seconds_since(start);
    if (!(secs < 120)) o.fail("runtime " + fmt("%.1f", secs) + " s");
    if (o.pass) o.detail = "max relative error " + fmt("%.3g", worst) + ", " + fmt("%.1f", secs) + " s";
    return o;
}

// ------------------------------------------------------------ criterion 2

Outcome criterion_metrics() {
    Outcome o;
    Rng rng(2024);
    std::size_t report_mismatch = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t c = 2 + rng.below(6), n = 1 + rng.below(80);
        std::vector<std::size_t> truth(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = rng.below(c);
            pred[i] = rng.uniform() < 0.5 ? truth[i] : rng.below(c);
        }
        const ClassificationReport r = classification_report(confusion_matrix(truth, pred, c));
        const oracle::Report e = oracle::counting_report(truth, pred, c);
        if (r.accuracy != e.accuracy || r.precision != e.precision || r.recall != e.recall || r.f1 != e.f1 ||
            r.macro_precision != e.macro_precision || r.macro_recall != e.macro_recall || r.macro_f1 != e.macro_f1) {
            ++report_mismatch;
        }
    }
    if (report_mismatch) o.fail(std::to_string(report_mismatch) + "/1000 reports differ from the counting oracle");

    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng.below(40), d = 1 + rng.below(5);
        const std::size_t k = 2 + rng.below(std::min<std::size_t>(5, n - 2));
        const Matrix x = random_matrix(n, d, rng.next_u64());
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng.below(k);
        worst = std::max(worst, std::abs(silhouette_score(x, labels) - oracle::silhouette(x, labels)));
    }
    if (!(worst < 1e-9)) o.fail("silhouette oracle gap " + fmt("%.3g", worst));

    Matrix four(4, 2);
    four << 0, 0, 0, 1, 10, 0, 10, 1;
    const double b = (10.0 + std::sqrt(101.0)) / 2.0;
    const double s = silhouette_score(four, {0, 0, 1, 1});
    if (!(std::abs(s - (b - 1.0) / b) < 1e-6)) o.fail("four-point example gave " + fmt("%.8f", s));
    if (o.pass) o.detail = "1000 reports exact, silhouette gap " + fmt("%.2g", worst) + ", four-point " + fmt("%.6f", s);
    return o;
}

// ------------------------------------------------------------ criterion 3

Outcome criterion_clustering() {
    Outcome o;
    Rng meta(303);
    std::size_t bad_monotone = 0, bad_fixed = 0, bad_optimal = 0, bad_gmm = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 10 + meta.below(90), d = 1 + meta.below(5);
        const Matrix x = random_matrix(n, d, meta.next_u64());
        KMeansParams p;
        p.k = 2 + meta.below(5);
        p.seed = meta.next_u64();
        p.init = trial % 2 ? KMeansInit::plus_plus : KMeansInit::random_points;
        const auto r = kmeans(x, p);
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
            if (r.objective_trace[i] > r.objective_trace[i - 1]) {
                ++bad_monotone;
                break;
            }
        }
        const auto again = kmeans_from(x, r.centroids, 1);
        if (!r.converged || again.assignments != r.assignments || again.centroids != r.centroids) ++bad_fixed;
    }
    std::size_t enumerated = 0;
    for (std::size_t n = 2; n <= 10; ++n) {
        for (int rep = 0; rep < 12; ++rep) {
            const std::size_t d = 1 + meta.below(3);
            const Matrix x = random_matrix(n, d, meta.next_u64());
            KMeansParams p;
            p.k = 2;
            p.restarts = std::size_t{1} << n;
            p.seed = meta.next_u64();
            const auto r = kmeans(x, p);
            const double best = oracle::best_two_partition_wcss(x);
            if (std::abs(wcss(x, r.assignments, r.centroids) - best) > 1e-9 * std::max(1.0, best)) ++bad_optimal;
            ++enumerated;
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 10 + meta.below(70), d = 1 + meta.below(4);
        const Matrix x = random_matrix(n, d, meta.next_u64());
        GmmParams p;
        p.k = 1 + meta.below(4);
        p.seed = meta.next_u64();
        const auto r = gmm_fit(x, p);
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
            const double prev = r.objective_trace[i - 1];
            if (r.objective_trace[i] - prev < -1e-9 * std::abs(prev)) {
                ++bad_gmm;
                break;
            }
        }
    }
    double closed_gap = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix x = random_matrix(30 + seed * 7, 1 + seed % 4, seed * 131);
        GmmParams p;
        p.k = 1;
        const auto r = gmm_fit(x, p);
        const Eigen::RowVectorXd mean = x.colwise().mean();
        const Eigen::RowVectorXd var = (x.rowwise() - mean).array().square().colwise().mean();
        closed_gap = std::max(closed_gap, (r.centroids.row(0) - mean).cwiseAbs().maxCoeff());
        closed_gap = std::max(closed_gap, (r.variances.row(0) - var).cwiseAbs().maxCoeff());
    }
    if (bad_monotone) o.fail(std::to_string(bad_monotone) + " K-Means traces increase");
    if (bad_fixed) o.fail(std::to_string(bad_fixed) + " K-Means results not a fixed point");
    if (bad_optimal) o.fail(std::to_string(bad_optimal) + "/" + std::to_string(enumerated) + " K-Means runs miss the optimum");
    if (bad_gmm) o.fail(std::to_string(bad_gmm) + " GMM log-likelihood traces decrease");
    if (!(closed_gap < 1e-9)) o.fail("GMM K=1 gap " + fmt("%.3g", closed_gap));
    if (o.pass) {
        o.detail = "100 K-Means, " + std::to_string(enumerated) + " enumerated, 100 GMM, K=1 gap " + fmt("%.2g", closed_gap);
    }
    return o;
}

// ------------------------------------------------------------ criterion 4

Outcome criterion_pca() {
    Outcome o;
    Rng meta(404);
    double ortho = 0, conservation = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 2 + meta.below(15), n = d + 1 + meta.below(50);
        Matrix x = random_matrix(n, d, meta.next_u64());
        for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j) *= 1.0 + 0.5 * static_cast<double>(j);
        const PcaModel m = pca_fit(x, d);
        const Eigen::MatrixXd gram = m.components.transpose() * m.components;
        ortho = std::max(ortho, (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
        const Matrix centred = x.rowwise() - x.colwise().mean();
        const double total = centred.squaredNorm() / static_cast<double>(n - 1);
        conservation = std::max(conservation, std::abs(m.explained_variance.sum() - total) / total);
    }
    Matrix line(7, 2);
    for (int i = 0; i < 7; ++i) line.row(i) << 0.3 * i - 1.0, 2.0 * (0.3 * i - 1.0) + 4.0;
    const double second = std::abs(pca_fit(line, 2).explained_variance(1));
    if (!(ortho < 1e-6)) o.fail("orthonormality " + fmt("%.3g", ortho));
    if (!(conservation < 1e-5)) o.fail("variance conservation " + fmt("%.3g", conservation));
    if (!(second < 1e-9)) o.fail("rank-1 second variance " + fmt("%.3g", second));
    if (o.pass) {
        o.detail = "orthonormality " + fmt("%.2g", ortho) + ", conservation " + fmt("%.2g", conservation) +
                   ", rank-1 " + fmt("%.2g", second);
    }
    return o;
}

// ------------------------------------------------------------ criterion 5

Outcome criterion_tsne() {
    Outcome o;
    Rng rng(505);
    const std::size_t per = 100, d = 10;
    Matrix x(static_cast<Eigen::Index>(2 * per), static_cast<Eigen::Index>(d));
    std::vector<std::size_t> truth;
    for (std::size_t i = 0; i < 2 * per; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal() + (j == 0 && i >= per ? 10.0 : 0.0);
        }
        truth.push_back(i >= per);
    }
    TsneParams p;
    p.seed = 7;
    const auto start = Clock::now();
    const TsneResult r = tsne(x, p);
    const double secs = seconds_since(start);

    double perp = 0;
    for (double v : r.realized_perplexity) perp = std::max(perp, std::abs(v - p.perplexity));
    KMeansParams kp;
    kp.k = 2;
    kp.restarts = 10;
    const auto a = kmeans(r.layout, kp).assignments;
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == truth[i];
    const double agreement = static_cast<double>(std::max(same, a.size() - same)) / static_cast<double>(a.size());

    if (!(perp <= 1e-4)) o.fail("perplexity error " + fmt("%.3g", perp));
    if (!(r.kl_trace.back() < r.kl_trace.front())) o.fail("KL did not decrease");
    if (!(agreement >= 0.95)) o.fail("two-blob agreement " + fmt("%.3f", agreement));
    if (!(secs < 120)) o.fail("runtime " + fmt("%.1f", secs) + " s");
    if (o.pass) {
        o.detail = "N=200, perplexity error " + fmt("%.2g", perp) + ", KL " + fmt("%.3f", r.kl_trace.front()) + " -> " +
                   fmt("%.3f", r.kl_trace.back()) + ", agreement " + fmt("%.3f", agreement) + ", " + fmt("%.1f", secs) + " s";
    }
    return o;
}

// ------------------------------------------------------------ criteria 6-8

using Table = std::map<std::string, std::vector<double>>;

Table read_table(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    Table t;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::stringstream ls(line);
        std::string name, cell;
        std::getline(ls, name, ',');
        while (std::getline(ls, cell, ',')) t[name].push_back(std::stod(cell));
    }
    return t;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Benchmark {
    std::vector<Table> classification, clustering;
    std::vector<fs::path> runs;
    double seconds = 0;
    std::string error;
};

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

Benchmark run_benchmark(const fs::path& work) {
    Benchmark b;
    const auto start = Clock::now();
    try {
        ExperimentConfig base = load_config(fs::path(FSEM_SOURCE_DIR) / "configs" / "shapes.ini");
        for (std::uint64_t seed : kSeeds) {
            ExperimentConfig c = base;
            c.seed = seed;
            c.output = work / ("seed-" + std::to_string(seed));
            fs::remove_all(c.output);
            const auto t = Clock::now();
            run_experiment(c);
            std::fprintf(stderr, "  seed %llu done in %.1f s\n", static_cast<unsigned long long>(seed), seconds_since(t));
            b.classification.push_back(read_table(c.output / "reports" / "classification.csv"));
            b.clustering.push_back(read_table(c.output / "reports" / "clustering.csv"));
            b.runs.push_back(c.output);
        }
    } catch (const std::exception& e) {
        b.error = e.what();
    }
    b.seconds = seconds_since(start);
    return b;
}

const std::vector<std::string> kOrder{"siamese-transfer", "siamese", "transfer", "cnn", "logistic-regression"};

Outcome criterion_table1(const Benchmark& b) {
    Outcome o;
    if (!b.error.empty()) {
        o.fail(b.error);
        return o;
    }
    std::map<std::string, double> med;
    std::string summary;
    for (const std::string& m : kOrder) {
        std::vector<double> acc;
        for (const Table& t : b.classification) acc.push_back(t.at(m).at(0));
        med[m] = median(acc);
        summary += (summary.empty() ? "" : " ") + m + "=" + fmt("%.4f", med[m]);
    }
    for (std::size_t i = 0; i + 1 < kOrder.size(); ++i) {
        if (!(med[kOrder[i]] >= med[kOrder[i + 1]])) o.fail(kOrder[i] + " < " + kOrder[i + 1]);
    }
    if (!(med["siamese-transfer"] >= 0.90)) o.fail("siamese-transfer below 0.90");
    for (std::size_t i = 0; i + 1 < kOrder.size(); ++i) {
        if (!(med["logistic-regression"] < med[kOrder[i]])) o.fail("logistic-regression not strictly lowest");
    }
    if (!(b.seconds < 1800)) o.fail("runtime " + fmt("%.0f", b.seconds) + " s");
    o.detail = (o.pass ? "" : o.detail + "; ") + "median accuracy " + summary + ", " + fmt("%.0f", b.seconds) + " s";
    return o;
}

Outcome criterion_table2(const Benchmark& b) {
    Outcome o;
    if (!b.error.empty()) {
        o.fail(b.error);
        return o;
    }
    std::size_t good = 0;
    std::string per_seed;
    for (const Table& t : b.clustering) {
        bool ok = true;
        for (std::size_t col : {0u, 1u}) {
            const double st = t.at("siamese-transfer").at(col), cnn = t.at("cnn").at(col),
                         lr = t.at("logistic-regression").at(col);
            ok = ok && st > cnn && cnn > lr;
        }
        good += ok;
        per_seed += ok ? "+" : "-";
    }
    if (good < 4) o.fail("ordering held in " + std::to_string(good) + "/5 seeds");
    o.detail = (o.pass ? "" : o.detail + "; ") + "siamese-transfer > cnn > logistic-regression under K-Means and GMM in " +
               std::to_string(good) + "/5 seeds [" + per_seed + "]";
    return o;
}

Outcome criterion_determinism(const Benchmark& b, const fs::path& work) {
    Outcome o;
    if (!b.error.empty()) {
        o.fail(b.error);
        return o;
    }
    try {
        ExperimentConfig base = load_config(fs::path(FSEM_SOURCE_DIR) / "configs" / "shapes.ini");
        std::size_t compared = 0;
        for (std::size_t i = 0; i < b.runs.size(); ++i) {
            // rerun into the same directory so config.ini is byte-identical too
            const fs::path first = work / ("first-" + std::to_string(kSeeds[i]));
            fs::remove_all(first);
            fs::rename(b.runs[i], first);
            ExperimentConfig c = base;
            c.seed = kSeeds[i];
            c.output = b.runs[i];
            run_experiment(c);
            const RunManifest one = read_manifest(first), two = read_manifest(b.runs[i]);
            if (one.config_sha256 != two.config_sha256) o.fail("config hash differs for seed " + std::to_string(kSeeds[i]));
            if (one.artifacts.size() != two.artifacts.size()) o.fail("artifact lists differ for seed " + std::to_string(kSeeds[i]));
            for (std::size_t k = 0; k < std::min(one.artifacts.size(), two.artifacts.size()); ++k) {
                if (one.artifacts[k].path != two.artifacts[k].path || one.artifacts[k].sha256 != two.artifacts[k].sha256) {
                    o.fail("seed " + std::to_string(kSeeds[i]) + ": " + one.artifacts[k].path + " differs");
                }
            }
            for (const char* report : {"classification.csv", "classification.md", "clustering.csv", "clustering.md"}) {
                if (sha256_file(first / "reports" / report) != sha256_file(b.runs[i] / "reports" / report)) {
                    o.fail(std::string(report) + " differs");
                }
            }
            if (!verify_manifest(b.runs[i]).empty()) o.fail("manifest does not verify for seed " + std::to_string(kSeeds[i]));
            compared += one.artifacts.size();
        }
        if (o.pass) o.detail = std::to_string(compared) + " artifacts byte-identical across reruns of 5 seeds";
    } catch (const std::exception& e) {
        o.fail(e.what());
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance-work");
    fs::create_directories(work);

    int failures = 0;
    auto report = [&](int id, const std::string& name, const Outcome& o) {
        std::printf("criterion %d %-22s %s  %s\n", id, name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    };
    auto guarded = [](const std::function<Outcome()>& f) {
        try {
            return f();
        } catch (const std::exception& e) {
            Outcome o;
            o.fail(std::string("exception: ") + e.what());
            return o;
        }
    };

    report(1, "gradient-suite", guarded(criterion_gradients));
    report(2, "metric-oracles", guarded(criterion_metrics));
    report(3, "clustering-properties", guarded(criterion_clustering));
    report(4, "pca-properties", guarded(criterion_pca));
    report(5, "tsne-properties", guarded(criterion_tsne));

    const Benchmark bench = run_benchmark(work);
    report(6, "classification-order", guarded([&] { return criterion_table1(bench); }));
    report(7, "silhouette-order", guarded([&] { return criterion_table2(bench); }));
    report(8, "determinism", guarded([&] { return criterion_determinism(bench, work); }));

    std::printf("%d of 8 criteria failed\n", failures);
    return failures ? 1 : 0;
}

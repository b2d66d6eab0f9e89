#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fsem/experiment.hpp"
#include "fsem/metrics.hpp"
#include "fsem/svg.hpp"
#include "fsem/synthetic.hpp"
#include "fsem/unsupervised.hpp"

namespace py = pybind11;
using namespace fsem;

namespace {

py::dict manifest_dict(const RunManifest& m) {
    py::dict d;
    d["toolkit_version"] = m.toolkit_version;
    d["config_sha256"] = m.config_sha256;
    py::dict seconds;
    for (const auto& [stage, s] : m.stage_seconds) seconds[py::str(stage)] = s;
    d["stage_seconds"] = seconds;
    py::dict artifacts;
    for (const auto& a : m.artifacts) artifacts[py::str(a.path)] = a.sha256;
    d["artifacts"] = artifacts;
    return d;
}

ExperimentConfig configured(const std::filesystem::path& config, std::optional<std::uint64_t> seed,
                            std::optional<std::filesystem::path> out) {
    ExperimentConfig c = load_config(config);
    if (seed) c.seed = *seed;
    if (out) c.output = *out;
    return c;
}

}  // namespace

PYBIND11_MODULE(_fsem, m) {
    m.doc() = "Few-shot embedding toolkit: experiment runner and analysis routines.";
    m.attr("__version__") = kToolkitVersion;

    py::register_exception<StageError>(m, "StageError", PyExc_RuntimeError);

    m.def(
        "run_experiment",
        [](const std::filesystem::path& config, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> out) {
            const ExperimentConfig c = configured(config, seed, out);
            RunManifest r;
            {
                py::gil_scoped_release release;
                r = run_experiment(c);
            }
            return manifest_dict(r);
        },
        py::arg("config"), py::arg("seed") = py::none(), py::arg("out") = py::none(),
        "Run every stage of the experiment described by an INI config; returns the manifest.");
    m.def(
        "run_stage",
        [](const std::filesystem::path& config, const std::string& stage, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> out) {
            const ExperimentConfig c = configured(config, seed, out);
            const Stage s = parse_stage(stage);
            RunManifest r;
            {
                py::gil_scoped_release release;
                r = run_stage(c, s);
            }
            return manifest_dict(r);
        },
        py::arg("config"), py::arg("stage"), py::arg("seed") = py::none(), py::arg("out") = py::none());
    m.def("verify_manifest", &verify_manifest, py::arg("output"),
          "Artifact paths whose content no longer matches the manifest.");
    m.def(
        "canonical_config", [](const std::string& text) { return parse_config(text).to_text(); }, py::arg("text"));

    m.def(
        "generate_synthetic",
        [](std::vector<std::string> kinds, std::size_t per_category, std::uint64_t seed, double noise,
           double position_jitter, double clutter) {
            SyntheticSpec s;
            if (!kinds.empty()) s.kinds = std::move(kinds);
            s.per_category = per_category;
            s.noise = noise;
            s.position_jitter = position_jitter;
            s.clutter = clutter;
            const LabeledDataset ds = generate_synthetic(s, seed);
            const std::size_t n = ds.size(), side = s.image_size;
            py::array_t<float> images({n, side, side});
            py::array_t<std::size_t> labels(n);
            auto img = images.mutable_unchecked<3>();
            for (std::size_t i = 0; i < n; ++i) {
                const auto v = ds.samples[i].pixels.values();
                for (std::size_t p = 0; p < side * side; ++p) img(i, p / side, p % side) = v[p];
                labels.mutable_at(i) = ds.samples[i].label;
            }
            return py::make_tuple(images, labels, ds.category_names);
        },
        py::arg("kinds") = std::vector<std::string>{}, py::arg("per_category") = 150, py::arg("seed") = 0,
        py::arg("noise") = 0.15, py::arg("position_jitter") = 3.0, py::arg("clutter") = 0.0,
        "Shapes dataset as (images [N, 32, 32] float32, labels, category names).");

    m.def(
        "pca",
        [](const Matrix& x, std::size_t k) {
            const PcaModel p = pca_fit(x, k);
            return py::make_tuple(pca_transform(p, x), p.components, p.explained_variance);
        },
        py::arg("x"), py::arg("k"), "Returns (projected, components, explained_variance).");
    m.def(
        "tsne",
        [](const Matrix& x, double perplexity, std::size_t iterations, std::uint64_t seed) {
            TsneParams p;
            p.perplexity = perplexity;
            p.iterations = iterations;
            p.seed = seed;
            const TsneResult r = tsne(x, p);
            return py::make_tuple(r.layout, r.kl_trace);
        },
        py::arg("x"), py::arg("perplexity") = 30.0, py::arg("iterations") = 1000, py::arg("seed") = 0,
        "Returns (layout [N, 2], KL divergence per iteration).");
    m.def(
        "kmeans",
        [](const Matrix& x, std::size_t k, std::uint64_t seed, std::size_t restarts) {
            KMeansParams p;
            p.k = k;
            p.seed = seed;
            p.restarts = restarts;
            p.init = KMeansInit::plus_plus;
            const ClusteringResult r = kmeans(x, p);
            return py::make_tuple(r.assignments, r.centroids, wcss(x, r.assignments, r.centroids));
        },
        py::arg("x"), py::arg("k"), py::arg("seed") = 0, py::arg("restarts") = 10,
        "Returns (assignments, centroids, wcss).");
    m.def(
        "gmm",
        [](const Matrix& x, std::size_t k, std::uint64_t seed) {
            GmmParams p;
            p.k = k;
            p.seed = seed;
            const ClusteringResult r = gmm_fit(x, p);
            return py::make_tuple(gmm_assign(r), r.weights, r.centroids, r.variances, r.objective_trace);
        },
        py::arg("x"), py::arg("k"), py::arg("seed") = 0,
        "Diagonal GMM; returns (assignments, weights, means, variances, log-likelihood trace).");
    m.def("silhouette_score", &silhouette_score, py::arg("x"), py::arg("labels"));
    m.def(
        "classification_report",
        [](const std::vector<std::size_t>& truth, const std::vector<std::size_t>& predicted, std::size_t categories) {
            const ClassificationReport r = classification_report(confusion_matrix(truth, predicted, categories));
            py::dict d;
            d["accuracy"] = r.accuracy;
            d["precision"] = r.precision;
            d["recall"] = r.recall;
            d["f1"] = r.f1;
            d["macro_precision"] = r.macro_precision;
            d["macro_recall"] = r.macro_recall;
            d["macro_f1"] = r.macro_f1;
            return d;
        },
        py::arg("truth"), py::arg("predicted"), py::arg("categories"));
    m.def("render_scatter_svg", &render_scatter_svg, py::arg("layout"), py::arg("labels"),
          py::arg("names") = std::vector<std::string>{}, py::arg("title") = "");
}

#include "fsem/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "fsem/checkpoint.hpp"
#include "fsem/image_io.hpp"
#include "fsem/metrics.hpp"
#include "fsem/rng.hpp"
#include "fsem/svg.hpp"

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace fsem {

namespace {

// ------------------------------------------------------------ text helpers

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string source_name(DataSource s) { return s == DataSource::synthetic ? "synthetic" : "directory"; }

// Section reader that tracks which keys were consumed so leftovers can be
// reported as unknown.
class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        if (!has(key)) return std::nullopt;
        return trim(tree_->get<std::string>(key));
    }

    template <typename T>
    void read(const std::string& key, T& out) {
        if (auto v = raw(key)) out = convert<T>(key, *v);
    }

    template <typename T>
    void read(const std::string& key, std::optional<T>& out) {
        if (auto v = raw(key)) out = convert<T>(key, *v);
    }

    void read_string(const std::string& key, std::string& out) {
        if (auto v = raw(key)) out = *v;
    }

    void finish() const {
        if (!tree_) return;
        for (const auto& [key, child] : *tree_) {
            if (!used_.count(key)) throw std::invalid_argument("config: unknown key '" + key + "' in [" + name_ + "]");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& value, const std::string& why) const {
        throw std::invalid_argument("config: [" + name_ + "] " + key + " = '" + value + "': " + why);
    }

private:
    template <typename T>
    T convert(const std::string& key, const std::string& v) const {
        if constexpr (std::is_same_v<T, double>) {
            try {
                std::size_t used = 0;
                const double d = std::stod(v, &used);
                if (used != v.size()) fail(key, v, "not a number");
                return d;
            } catch (const std::logic_error&) {
                fail(key, v, "not a number");
            }
        } else if constexpr (std::is_same_v<T, bool>) {
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            fail(key, v, "expected true or false");
        } else {
            T out{};
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || ptr != v.data() + v.size()) fail(key, v, "expected a non-negative integer");
            return out;
        }
    }

    std::string name_;
    const pt::ptree* tree_;
    std::set<std::string> used_;
};

DataSource parse_source(Section& sec, const std::string& value) {
    if (value == "synthetic") return DataSource::synthetic;
    if (value == "directory") return DataSource::directory;
    sec.fail("source", value, "expected synthetic or directory");
}

void read_synthetic(Section& sec, SyntheticSpec& s) {
    if (auto v = sec.raw("kinds")) s.kinds = split_list(*v);
    sec.read("per_category", s.per_category);
    sec.read("image_size", s.image_size);
    sec.read("position_jitter", s.position_jitter);
    sec.read("scale_jitter", s.scale_jitter);
    sec.read("rotation_jitter", s.rotation_jitter);
    sec.read("intensity_jitter", s.intensity_jitter);
    sec.read("background", s.background);
    sec.read("noise", s.noise);
    sec.read("clutter", s.clutter);
}

void write_synthetic(std::string& out, const SyntheticSpec& s) {
    out += "kinds = " + join(s.kinds) + "\n";
    out += "per_category = " + std::to_string(s.per_category) + "\n";
    out += "image_size = " + std::to_string(s.image_size) + "\n";
    out += "position_jitter = " + format_double(s.position_jitter) + "\n";
    out += "scale_jitter = " + format_double(s.scale_jitter) + "\n";
    out += "rotation_jitter = " + format_double(s.rotation_jitter) + "\n";
    out += "intensity_jitter = " + format_double(s.intensity_jitter) + "\n";
    out += "background = " + format_double(s.background) + "\n";
    out += "noise = " + format_double(s.noise) + "\n";
    out += "clutter = " + format_double(s.clutter) + "\n";
}

// Recipe keys are parsed by ModelRecipe::from_text; the section is turned
// back into its key=value form.
const std::vector<std::string> kRecipeKeys{"kind",          "conv_channels", "hidden_widths", "embedding_dim",
                                           "epochs",        "batch_size",    "learning_rate", "momentum",
                                           "margin",        "pairs_per_sample", "positive_ratio", "seed"};
const std::vector<std::string> kPretrainRecipeKeys{"conv_channels", "hidden_widths", "epochs",
                                                   "batch_size",    "learning_rate", "momentum"};

ModelRecipe read_recipe(Section& sec, const std::vector<std::string>& keys, ModelRecipe base) {
    std::string text = base.to_text();
    for (const std::string& key : keys) {
        if (auto v = sec.raw(key)) text += key + "=" + *v + "\n";
    }
    try {
        return ModelRecipe::from_text(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: bad recipe value: " + std::string(e.what()));
    }
}

std::string recipe_ini(const ModelRecipe& r, const std::vector<std::string>& keys, bool with_seed) {
    std::string out;
    std::stringstream ss(r.to_text());
    std::string line;
    while (std::getline(ss, line)) {
        const std::string key = line.substr(0, line.find('='));
        if (key == "seed" && !with_seed) continue;
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) continue;
        out += key + " = " + line.substr(key.size() + 1) + "\n";
    }
    return out;
}

bool valid_block_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
    }
    return name != "backbone" && name != kPcaTsneFile && name.front() != '.';
}

// ------------------------------------------------------------ artifact I/O

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name, const fs::path& path) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error(path.string() + ": no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }
};

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string() + " (has the earlier stage run?)");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Csv read_csv(const fs::path& path) {
    std::stringstream ss(read_text(path));
    Csv csv;
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            csv.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != csv.header.size()) throw std::runtime_error(path.string() + ": ragged row");
            csv.rows.push_back(std::move(cells));
        }
    }
    return csv;
}

std::size_t to_index(const std::string& s, const fs::path& path) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error(path.string() + ": bad integer '" + s + "'");
    return v;
}

struct LabeledPoints {
    Matrix points;
    std::vector<std::size_t> labels;
};

// Embedding files: index,label,e0..e{d-1}, values at full precision.
void write_points(const fs::path& path, const Matrix& points, const std::vector<std::size_t>& labels) {
    std::string out = "index,label";
    for (Eigen::Index j = 0; j < points.cols(); ++j) out += ",e" + std::to_string(j);
    out += "\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out += std::to_string(i) + "," + std::to_string(labels[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < points.cols(); ++j) out += "," + format_double(points(i, j));
        out += "\n";
    }
    write_text(path, out);
}

LabeledPoints read_points(const fs::path& path) {
    const Csv csv = read_csv(path);
    if (csv.header.size() < 3) throw std::runtime_error(path.string() + ": no embedding columns");
    LabeledPoints lp;
    const auto d = static_cast<Eigen::Index>(csv.header.size() - 2);
    lp.points.resize(static_cast<Eigen::Index>(csv.rows.size()), d);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        lp.labels.push_back(to_index(csv.rows[i][1], path));
        for (Eigen::Index j = 0; j < d; ++j) {
            lp.points(static_cast<Eigen::Index>(i), j) = std::stod(csv.rows[i][static_cast<std::size_t>(j) + 2]);
        }
    }
    return lp;
}

// ------------------------------------------------------------ run layout

struct Layout {
    fs::path root;
    fs::path raw() const { return root / "data" / "raw"; }
    fs::path auxiliary() const { return root / "data" / "auxiliary"; }
    fs::path prepared() const { return root / "data" / "prepared"; }
    fs::path split() const { return root / "data" / "split.csv"; }
    fs::path backbone() const { return root / "models" / "backbone.fsem"; }
    fs::path backbone_trace() const { return root / "models" / "backbone.trace.csv"; }
    fs::path model(const std::string& name) const { return root / "models" / (name + ".fsem"); }
    fs::path embedding(const std::string& file) const { return root / "embeddings" / (file + ".csv"); }
    fs::path clusters(const std::string& file) const { return root / "clusters" / (file + ".csv"); }
    fs::path predictions(const std::string& name) const { return root / "predictions" / (name + ".csv"); }
    fs::path reports() const { return root / "reports"; }
    fs::path plots() const { return root / "plots"; }
    fs::path manifest() const { return root / "manifest.txt"; }
    fs::path config() const { return root / "config.ini"; }
};

void reset_dir(const fs::path& p) {
    fs::remove_all(p);
    fs::create_directories(p);
}

// Every embedding source clustered and reported: the model blocks in order,
// then the PCA+t-SNE row.
struct SourceRef {
    std::string display;
    std::string file;
};

std::vector<SourceRef> sources(const ExperimentConfig& c) {
    std::vector<SourceRef> out;
    for (const ModelBlock& m : c.models) out.push_back({m.name, m.name});
    out.push_back({kPcaTsneName, kPcaTsneFile});
    return out;
}

LabeledDataset resized(LabeledDataset ds, std::size_t side) {
    for (ImageSample& s : ds.samples) {
        if (s.height() != side || s.width() != side) s = resize(s, side, side);
    }
    return ds;
}

LabeledDataset load_prepared(const Layout& L) { return load_dataset(L.prepared()); }

SplitDataset load_split(const Layout& L) {
    SplitDataset sp;
    sp.parent = std::make_shared<const LabeledDataset>(load_prepared(L));
    const Csv csv = read_csv(L.split());
    const std::size_t ic = csv.column("index", L.split()), pc = csv.column("part", L.split());
    for (const auto& row : csv.rows) {
        const std::size_t i = to_index(row[ic], L.split());
        if (i >= sp.parent->size()) throw std::runtime_error(L.split().string() + ": index out of range");
        if (row[pc] == "train") sp.train.push_back(i);
        else if (row[pc] == "validation") sp.validation.push_back(i);
        else if (row[pc] == "test") sp.test.push_back(i);
        else throw std::runtime_error(L.split().string() + ": unknown part '" + row[pc] + "'");
    }
    return sp;
}

std::size_t cluster_count(const ExperimentConfig& c, const SplitDataset& sp) {
    return c.clustering.k ? c.clustering.k : sp.parent->category_count();
}

Matrix flatten_pixels(const LabeledDataset& ds) {
    if (ds.samples.empty()) return Matrix(0, 0);
    const std::size_t d = ds.samples[0].pixels.size();
    Matrix x(static_cast<Eigen::Index>(ds.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto v = ds.samples[i].pixels.values();
        if (v.size() != d) throw std::runtime_error("images differ in size");
        for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[j];
    }
    return x;
}

// ------------------------------------------------------------ stages

void stage_synth(const ExperimentConfig& c, const Layout& L) {
    if (c.dataset.source == DataSource::synthetic) {
        reset_dir(L.raw());
        save_dataset(L.raw(), generate_synthetic(c.dataset.synthetic, c.dataset_seed()));
    }
    if (c.needs_backbone() && c.pretrain.source == DataSource::synthetic) {
        reset_dir(L.auxiliary());
        save_dataset(L.auxiliary(), generate_synthetic(c.pretrain.synthetic, mix_seed(c.pretrain_seed(), 0)));
    }
}

void stage_ingest(const ExperimentConfig& c, const Layout& L) {
    const fs::path src = c.dataset.source == DataSource::synthetic ? L.raw() : c.dataset.path;
    if (!fs::is_directory(src)) throw std::runtime_error("dataset directory " + src.string() + " does not exist");
    LabeledDataset ds = resized(load_dataset(src), c.preprocess.image_size);

    AugmentParams aug = c.preprocess.augment;
    aug.seed = mix_seed(c.preprocess_seed(), 0);
    ds = expand_dataset(ds, c.preprocess.expand_fraction, aug);
    // group by category so the saved tree loads back in the same order
    std::stable_sort(ds.samples.begin(), ds.samples.end(),
                     [](const ImageSample& a, const ImageSample& b) { return a.label < b.label; });
    reset_dir(L.prepared());
    save_dataset(L.prepared(), ds);

    const SplitDataset sp =
        split(std::make_shared<const LabeledDataset>(load_prepared(L)), c.preprocess.ratios, mix_seed(c.preprocess_seed(), 1));
    std::vector<std::pair<std::size_t, const char*>> parts;
    for (std::size_t i : sp.train) parts.emplace_back(i, "train");
    for (std::size_t i : sp.validation) parts.emplace_back(i, "validation");
    for (std::size_t i : sp.test) parts.emplace_back(i, "test");
    std::sort(parts.begin(), parts.end());
    std::string out = "index,part\n";
    for (const auto& [i, part] : parts) out += std::to_string(i) + "," + part + "\n";
    write_text(L.split(), out);
}

std::string trace_csv(const std::string& model, const std::vector<EpochRecord>& trace) {
    std::string out;
    for (std::size_t e = 0; e < trace.size(); ++e) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s,%zu,%.8g,%.6f\n", model.c_str(), e + 1, trace[e].loss,
                      trace[e].validation_accuracy);
        out += buf;
    }
    return out;
}

void stage_train(const ExperimentConfig& c, const Layout& L) {
    const SplitDataset sp = load_split(L);
    std::optional<Network<float>> backbone;
    if (c.needs_backbone()) {
        const fs::path aux_dir = c.pretrain.source == DataSource::synthetic ? L.auxiliary() : c.pretrain.path;
        if (!fs::is_directory(aux_dir)) {
            throw std::runtime_error("auxiliary dataset directory " + aux_dir.string() + " does not exist");
        }
        const LabeledDataset aux = resized(load_dataset(aux_dir), c.preprocess.image_size);
        std::set<std::string> target(sp.parent->category_names.begin(), sp.parent->category_names.end());
        for (const std::string& name : aux.category_names) {
            if (target.count(name)) throw std::runtime_error("auxiliary category '" + name + "' is also a target category");
        }
        ModelRecipe r = c.pretrain.recipe;
        r.kind = ModelKind::cnn;
        r.seed = mix_seed(c.pretrain_seed(), 1);
        std::vector<EpochRecord> trace;
        backbone = pretrain_backbone(aux, r, &trace);
        fs::create_directories(L.backbone().parent_path());
        save_network(L.backbone(), *backbone);
        write_text(L.backbone_trace(), "model,epoch,loss,validation_accuracy\n" + trace_csv("backbone", trace));
    }
    for (std::size_t b = 0; b < c.models.size(); ++b) {
        ModelRecipe r = c.models[b].recipe;
        r.seed = c.model_seed(b);
        const Network<float>* bb = nullptr;
        if (r.kind == ModelKind::transfer || r.kind == ModelKind::siamese_transfer) bb = &*backbone;
        const TrainedModel m = train_model(sp, r, bb);
        fs::create_directories(L.model(c.models[b].name).parent_path());
        save_model(L.model(c.models[b].name), m);
    }
}

void stage_embed(const ExperimentConfig& c, const Layout& L) {
    const SplitDataset sp = load_split(L);
    const LabeledDataset test = sp.test_set();
    const std::vector<std::size_t> labels = test.labels();
    fs::remove_all(L.root / "embeddings");
    std::map<std::string, Matrix> by_name;
    for (const ModelBlock& m : c.models) {
        const Matrix e = embed(load_model(L.model(m.name)), test);
        write_points(L.embedding(m.name), e, labels);
        by_name.emplace(m.name, e);
    }
    const Matrix x = c.clustering.pca_source == "pixels" ? flatten_pixels(test) : by_name.at(c.clustering.pca_source);
    const std::size_t dims = pca_dims(c.clustering.pca_dims, static_cast<std::size_t>(x.rows()),
                                      static_cast<std::size_t>(x.cols()));
    const Matrix reduced = pca_transform(pca_fit(x, dims), x);
    TsneParams tp = c.clustering.tsne;
    tp.perplexity = tsne_perplexity_cap(tp.perplexity, static_cast<std::size_t>(reduced.rows()));
    tp.seed = mix_seed(c.clustering_seed(), 1000);
    write_points(L.embedding(kPcaTsneFile), tsne(reduced, tp).layout, labels);
}

void stage_cluster(const ExperimentConfig& c, const Layout& L) {
    const SplitDataset sp = load_split(L);
    const std::size_t k = cluster_count(c, sp);
    fs::remove_all(L.root / "clusters");
    const auto srcs = sources(c);
    for (std::size_t s = 0; s < srcs.size(); ++s) {
        const LabeledPoints lp = read_points(L.embedding(srcs[s].file));
        std::vector<std::size_t> km, gm;
        if (c.clustering.kmeans) {
            KMeansParams p;
            p.k = k;
            p.init = c.clustering.kmeans_init;
            p.seed = mix_seed(c.clustering_seed(), 2 * s);
            p.max_iterations = c.clustering.kmeans_max_iterations;
            p.restarts = c.clustering.kmeans_restarts;
            km = kmeans(lp.points, p).assignments;
        }
        if (c.clustering.gmm) {
            GmmParams p;
            p.k = k;
            p.seed = mix_seed(c.clustering_seed(), 2 * s + 1);
            p.max_iterations = c.clustering.gmm_max_iterations;
            p.tolerance = c.clustering.gmm_tolerance;
            gm = gmm_assign(gmm_fit(lp.points, p));
        }
        std::string out = "index,label";
        if (c.clustering.kmeans) out += ",kmeans";
        if (c.clustering.gmm) out += ",gmm";
        out += "\n";
        for (std::size_t i = 0; i < lp.labels.size(); ++i) {
            out += std::to_string(i) + "," + std::to_string(lp.labels[i]);
            if (c.clustering.kmeans) out += "," + std::to_string(km[i]);
            if (c.clustering.gmm) out += "," + std::to_string(gm[i]);
            out += "\n";
        }
        write_text(L.clusters(srcs[s].file), out);
    }
}

void stage_evaluate(const ExperimentConfig& c, const Layout& L) {
    const SplitDataset sp = load_split(L);
    const LabeledDataset test = sp.test_set();
    fs::remove_all(L.root / "predictions");
    for (const ModelBlock& m : c.models) {
        const std::vector<std::size_t> pred = evaluate(load_model(L.model(m.name)), test);
        std::string out = "index,label,prediction\n";
        for (std::size_t i = 0; i < pred.size(); ++i) {
            out += std::to_string(i) + "," + std::to_string(test.samples[i].label) + "," + std::to_string(pred[i]) + "\n";
        }
        write_text(L.predictions(m.name), out);
    }
}

std::vector<std::size_t> column_values(const Csv& csv, const std::string& name, const fs::path& path) {
    const std::size_t col = csv.column(name, path);
    std::vector<std::size_t> out;
    for (const auto& row : csv.rows) out.push_back(to_index(row[col], path));
    return out;
}

// Silhouette of a clustering, or NaN when it does not meet the cluster-count
// precondition (for instance every point in one component).
double clustering_silhouette(const Matrix& x, const std::vector<std::size_t>& assignment) {
    const std::set<std::size_t> distinct(assignment.begin(), assignment.end());
    if (distinct.size() < 2 || distinct.size() + 1 > assignment.size()) return std::numeric_limits<double>::quiet_NaN();
    return silhouette_score(x, assignment);
}

void stage_report(const ExperimentConfig& c, const Layout& L) {
    const std::size_t categories = load_prepared(L).category_count();
    std::vector<ClassificationRow> classification;
    std::string per_category = "model,category,precision,recall,f1\n";
    std::string training = "model,epoch,loss,validation_accuracy\n";
    for (const ModelBlock& m : c.models) {
        const Csv csv = read_csv(L.predictions(m.name));
        const auto truth = column_values(csv, "label", L.predictions(m.name));
        const auto pred = column_values(csv, "prediction", L.predictions(m.name));
        const ClassificationReport rep = classification_report(confusion_matrix(truth, pred, categories));
        classification.push_back({m.name, rep});
        for (std::size_t k = 0; k < categories; ++k) {
            char buf[96];
            std::snprintf(buf, sizeof buf, ",%zu,%.4f,%.4f,%.4f\n", k, rep.precision[k], rep.recall[k], rep.f1[k]);
            per_category += m.name + buf;
        }
        training += trace_csv(m.name, load_model(L.model(m.name)).trace);
    }
    std::vector<ClusteringRow> clustering;
    for (const SourceRef& s : sources(c)) {
        const LabeledPoints lp = read_points(L.embedding(s.file));
        const Csv csv = read_csv(L.clusters(s.file));
        ClusteringRow row{s.display, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        if (c.clustering.kmeans) row.kmeans = clustering_silhouette(lp.points, column_values(csv, "kmeans", L.clusters(s.file)));
        if (c.clustering.gmm) row.gmm = clustering_silhouette(lp.points, column_values(csv, "gmm", L.clusters(s.file)));
        clustering.push_back(row);
    }
    reset_dir(L.reports());
    write_text(L.reports() / "classification.csv", classification_table_csv(classification));
    write_text(L.reports() / "classification.md", classification_table_markdown(classification));
    write_text(L.reports() / "clustering.csv", clustering_table_csv(clustering));
    write_text(L.reports() / "clustering.md", clustering_table_markdown(clustering));
    write_text(L.reports() / "per_category.csv", per_category);
    write_text(L.reports() / "training.csv", training);
}

// 2-D view of an embedding: as is when already 2-D, else its top two
// principal components.
Matrix planar(const Matrix& x) {
    if (x.cols() == 2) return x;
    if (x.cols() < 2 || x.rows() < 3) {
        Matrix out = Matrix::Zero(x.rows(), 2);
        out.leftCols(std::min<Eigen::Index>(x.cols(), 2)) = x.leftCols(std::min<Eigen::Index>(x.cols(), 2));
        return out;
    }
    return pca_transform(pca_fit(x, 2), x);
}

void stage_visualize(const ExperimentConfig& c, const Layout& L) {
    const std::vector<std::string> names = load_prepared(L).category_names;
    reset_dir(L.plots());
    for (const SourceRef& s : sources(c)) {
        const LabeledPoints lp = read_points(L.embedding(s.file));
        const Matrix layout = planar(lp.points);
        visualize(layout, lp.labels, names, s.display + ": categories", L.plots() / (s.file + ".labels.svg"));
        const Csv csv = read_csv(L.clusters(s.file));
        for (const char* algo : {"kmeans", "gmm"}) {
            if (std::find(csv.header.begin(), csv.header.end(), algo) == csv.header.end()) continue;
            const auto assignment = column_values(csv, algo, L.clusters(s.file));
            std::vector<std::string> cluster_names;
            for (std::size_t k = 0; k < cluster_count(c, load_split(L)); ++k) cluster_names.push_back("cluster " + std::to_string(k));
            const std::string title = s.display + (std::string(algo) == "kmeans" ? ": K-Means clusters" : ": GMM clusters");
            visualize(layout, assignment, cluster_names, title, L.plots() / (s.file + "." + algo + ".svg"));
        }
    }
}

// ------------------------------------------------------------ manifest

std::string relative_string(const fs::path& p, const fs::path& root) { return p.lexically_relative(root).generic_string(); }

RunManifest scan(const ExperimentConfig& c, const Layout& L, const RunManifest& previous) {
    RunManifest m;
    m.config_sha256 = sha256_hex(c.to_text());
    m.stage_seconds = previous.stage_seconds;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(L.root)) {
        if (entry.is_regular_file() && entry.path() != L.manifest()) files.push_back(entry.path());
    }
    std::vector<std::string> rel;
    for (const fs::path& f : files) rel.push_back(relative_string(f, L.root));
    std::sort(rel.begin(), rel.end());
    for (const std::string& r : rel) m.artifacts.push_back({r, sha256_file(L.root / r)});
    return m;
}

}  // namespace

// ------------------------------------------------------------ config

PretrainConfig::PretrainConfig() {
    synthetic.kinds = default_auxiliary_kinds();
    synthetic.per_category = 200;
    recipe.kind = ModelKind::cnn;
}

std::uint64_t ExperimentConfig::dataset_seed() const { return dataset.seed.value_or(mix_seed(seed, 1)); }
std::uint64_t ExperimentConfig::pretrain_seed() const { return pretrain.seed.value_or(mix_seed(seed, 2)); }
std::uint64_t ExperimentConfig::preprocess_seed() const { return preprocess.seed.value_or(mix_seed(seed, 3)); }
std::uint64_t ExperimentConfig::clustering_seed() const { return clustering.seed.value_or(mix_seed(seed, 4)); }

std::uint64_t ExperimentConfig::model_seed(std::size_t block) const {
    const ModelBlock& m = models.at(block);
    return m.explicit_seed ? m.recipe.seed : mix_seed(seed, 100 + block);
}

bool ExperimentConfig::needs_backbone() const {
    return std::any_of(models.begin(), models.end(), [](const ModelBlock& m) {
        return m.recipe.kind == ModelKind::transfer || m.recipe.kind == ModelKind::siamese_transfer;
    });
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
    if (output.empty()) fail("output directory is empty");
    if (dataset.source == DataSource::synthetic) {
        dataset.synthetic.validate();
    } else if (dataset.path.empty()) {
        fail("[dataset] source = directory needs a path");
    }
    if (preprocess.image_size == 0) fail("[preprocess] image_size must be positive");
    if (!(preprocess.expand_fraction >= 0.0 && preprocess.expand_fraction <= 1.0)) {
        fail("[preprocess] expand_fraction must lie in [0, 1]");
    }
    preprocess.augment.validate();
    const SplitRatios& r = preprocess.ratios;
    if (!(r.train > 0 && r.validation > 0 && r.test > 0) || std::abs(r.train + r.validation + r.test - 1.0) > 1e-9) {
        fail("[preprocess] split ratios must be positive and sum to 1");
    }
    if (models.empty()) fail("no [model.<name>] blocks");
    std::set<std::string> names;
    for (const ModelBlock& m : models) {
        if (!valid_block_name(m.name)) fail("model name '" + m.name + "' is not allowed");
        if (!names.insert(m.name).second) fail("duplicate model name '" + m.name + "'");
        m.recipe.validate();
    }
    if (needs_backbone()) {
        if (pretrain.source == DataSource::synthetic) pretrain.synthetic.validate();
        else if (pretrain.path.empty()) fail("[pretrain] source = directory needs a path");
        ModelRecipe p = pretrain.recipe;
        p.kind = ModelKind::cnn;
        p.validate();
        for (const ModelBlock& m : models) {
            const bool uses_backbone = m.recipe.kind == ModelKind::transfer || m.recipe.kind == ModelKind::siamese_transfer;
            if (uses_backbone && m.recipe.conv_channels != pretrain.recipe.conv_channels) {
                // these blocks take the backbone's conv stack, so their own
                // conv_channels must describe it
                fail("model '" + m.name + "' conv_channels differ from [pretrain] conv_channels");
            }
        }
    }
    const ClusteringConfig& k = clustering;
    if (k.k == 1) fail("[clustering] k must be 0 (category count) or at least 2");
    if (!k.kmeans && !k.gmm) fail("[clustering] algorithms must name kmeans and/or gmm");
    if (k.kmeans_restarts == 0 || k.kmeans_max_iterations == 0 || k.gmm_max_iterations == 0) {
        fail("[clustering] iteration and restart counts must be positive");
    }
    if (!(k.gmm_tolerance > 0)) fail("[clustering] gmm_tolerance must be positive");
    if (k.pca_dims == 0) fail("[clustering] pca_dims must be positive");
    if (k.pca_source != "pixels" && !names.count(k.pca_source)) {
        fail("[clustering] pca_source '" + k.pca_source + "' is neither pixels nor a model name");
    }
    if (!(k.tsne.perplexity > 0) || k.tsne.iterations == 0 || !(k.tsne.learning_rate > 0) ||
        !(k.tsne.early_exaggeration >= 1)) {
        fail("[clustering] t-SNE parameters must be positive (exaggeration >= 1)");
    }
}

ExperimentConfig parse_config(std::string_view text, const fs::path& base) {
    pt::ptree tree;
    std::istringstream is{std::string(text)};
    try {
        pt::ini_parser::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    auto section = [&](const std::string& name) {
        const auto it = tree.find(name);
        return Section(name, it == tree.not_found() ? nullptr : &it->second);
    };
    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() || base.empty() ? path : base / path;
    };

    ExperimentConfig c;
    std::set<std::string> known{"experiment", "dataset", "preprocess", "pretrain", "clustering"};
    for (const auto& [name, child] : tree) {
        if (child.empty() && !child.data().empty()) {
            throw std::invalid_argument("config: key '" + name + "' outside any section");
        }
        if (!known.count(name) && name.rfind("model.", 0) != 0) {
            throw std::invalid_argument("config: unknown section [" + name + "]");
        }
    }

    {
        Section s = section("experiment");
        s.read("seed", c.seed);
        if (auto v = s.raw("output")) c.output = *v;
        s.finish();
    }
    {
        Section s = section("dataset");
        if (auto v = s.raw("source")) c.dataset.source = parse_source(s, *v);
        if (auto v = s.raw("path")) c.dataset.path = resolve(*v);
        read_synthetic(s, c.dataset.synthetic);
        s.read("seed", c.dataset.seed);
        s.finish();
    }
    {
        Section s = section("preprocess");
        PreprocessConfig& p = c.preprocess;
        s.read("image_size", p.image_size);
        s.read("expand_fraction", p.expand_fraction);
        s.read("rotation_deg", p.augment.rotation_deg);
        s.read("shear", p.augment.shear);
        s.read("zoom_min", p.augment.zoom_min);
        s.read("zoom_max", p.augment.zoom_max);
        if (auto v = s.raw("fill")) {
            if (*v == "edge") p.augment.fill = BoundaryFill::edge;
            else if (*v == "constant") p.augment.fill = BoundaryFill::constant;
            else s.fail("fill", *v, "expected edge or constant");
        }
        double fill_value = p.augment.fill_value;
        s.read("fill_value", fill_value);
        p.augment.fill_value = static_cast<float>(fill_value);
        s.read("train", p.ratios.train);
        s.read("validation", p.ratios.validation);
        s.read("test", p.ratios.test);
        s.read("seed", p.seed);
        s.finish();
    }
    {
        Section s = section("pretrain");
        if (auto v = s.raw("source")) c.pretrain.source = parse_source(s, *v);
        if (auto v = s.raw("path")) c.pretrain.path = resolve(*v);
        read_synthetic(s, c.pretrain.synthetic);
        c.pretrain.recipe = read_recipe(s, kPretrainRecipeKeys, c.pretrain.recipe);
        s.read("seed", c.pretrain.seed);
        s.finish();
    }
    for (const auto& [name, child] : tree) {
        if (name.rfind("model.", 0) != 0) continue;
        Section s(name, &child);
        ModelBlock block;
        block.name = name.substr(6);
        if (!s.has("kind")) throw std::invalid_argument("config: [" + name + "] needs a kind");
        block.explicit_seed = s.has("seed");
        block.recipe = read_recipe(s, kRecipeKeys, ModelRecipe{});
        s.finish();
        c.models.push_back(std::move(block));
    }
    {
        Section s = section("clustering");
        ClusteringConfig& k = c.clustering;
        s.read("k", k.k);
        if (auto v = s.raw("algorithms")) {
            k.kmeans = k.gmm = false;
            for (const std::string& a : split_list(*v)) {
                if (a == "kmeans") k.kmeans = true;
                else if (a == "gmm") k.gmm = true;
                else s.fail("algorithms", *v, "expected kmeans and/or gmm");
            }
        }
        if (auto v = s.raw("kmeans_init")) {
            if (*v == "random") k.kmeans_init = KMeansInit::random_points;
            else if (*v == "plus_plus") k.kmeans_init = KMeansInit::plus_plus;
            else s.fail("kmeans_init", *v, "expected random or plus_plus");
        }
        s.read("kmeans_restarts", k.kmeans_restarts);
        s.read("kmeans_max_iterations", k.kmeans_max_iterations);
        s.read("gmm_max_iterations", k.gmm_max_iterations);
        s.read("gmm_tolerance", k.gmm_tolerance);
        s.read_string("pca_source", k.pca_source);
        s.read("pca_dims", k.pca_dims);
        s.read("perplexity", k.tsne.perplexity);
        s.read("tsne_iterations", k.tsne.iterations);
        s.read("tsne_learning_rate", k.tsne.learning_rate);
        s.read("early_exaggeration", k.tsne.early_exaggeration);
        s.read("exaggeration_iterations", k.tsne.exaggeration_iterations);
        s.read("seed", k.seed);
        s.finish();
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    return parse_config(read_text(path), path.parent_path());
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    out += "[experiment]\nseed = " + std::to_string(seed) + "\noutput = " + output.generic_string() + "\n\n";

    out += "[dataset]\nsource = " + source_name(dataset.source) + "\n";
    if (dataset.source == DataSource::directory) out += "path = " + dataset.path.generic_string() + "\n";
    else write_synthetic(out, dataset.synthetic);
    if (dataset.seed) out += "seed = " + std::to_string(*dataset.seed) + "\n";
    out += "\n";

    const PreprocessConfig& p = preprocess;
    out += "[preprocess]\nimage_size = " + std::to_string(p.image_size) + "\n";
    out += "expand_fraction = " + format_double(p.expand_fraction) + "\n";
    out += "rotation_deg = " + format_double(p.augment.rotation_deg) + "\n";
    out += "shear = " + format_double(p.augment.shear) + "\n";
    out += "zoom_min = " + format_double(p.augment.zoom_min) + "\n";
    out += "zoom_max = " + format_double(p.augment.zoom_max) + "\n";
    out += std::string("fill = ") + (p.augment.fill == BoundaryFill::edge ? "edge" : "constant") + "\n";
    out += "fill_value = " + format_double(p.augment.fill_value) + "\n";
    out += "train = " + format_double(p.ratios.train) + "\n";
    out += "validation = " + format_double(p.ratios.validation) + "\n";
    out += "test = " + format_double(p.ratios.test) + "\n";
    if (p.seed) out += "seed = " + std::to_string(*p.seed) + "\n";
    out += "\n";

    out += "[pretrain]\nsource = " + source_name(pretrain.source) + "\n";
    if (pretrain.source == DataSource::directory) out += "path = " + pretrain.path.generic_string() + "\n";
    else write_synthetic(out, pretrain.synthetic);
    out += recipe_ini(pretrain.recipe, kPretrainRecipeKeys, false);
    if (pretrain.seed) out += "seed = " + std::to_string(*pretrain.seed) + "\n";
    out += "\n";

    for (const ModelBlock& m : models) {
        out += "[model." + m.name + "]\n" + recipe_ini(m.recipe, kRecipeKeys, m.explicit_seed) + "\n";
    }

    const ClusteringConfig& k = clustering;
    std::vector<std::string> algos;
    if (k.kmeans) algos.push_back("kmeans");
    if (k.gmm) algos.push_back("gmm");
    out += "[clustering]\nk = " + std::to_string(k.k) + "\nalgorithms = " + join(algos) + "\n";
    out += std::string("kmeans_init = ") + (k.kmeans_init == KMeansInit::plus_plus ? "plus_plus" : "random") + "\n";
    out += "kmeans_restarts = " + std::to_string(k.kmeans_restarts) + "\n";
    out += "kmeans_max_iterations = " + std::to_string(k.kmeans_max_iterations) + "\n";
    out += "gmm_max_iterations = " + std::to_string(k.gmm_max_iterations) + "\n";
    out += "gmm_tolerance = " + format_double(k.gmm_tolerance) + "\n";
    out += "pca_source = " + k.pca_source + "\n";
    out += "pca_dims = " + std::to_string(k.pca_dims) + "\n";
    out += "perplexity = " + format_double(k.tsne.perplexity) + "\n";
    out += "tsne_iterations = " + std::to_string(k.tsne.iterations) + "\n";
    out += "tsne_learning_rate = " + format_double(k.tsne.learning_rate) + "\n";
    out += "early_exaggeration = " + format_double(k.tsne.early_exaggeration) + "\n";
    out += "exaggeration_iterations = " + std::to_string(k.tsne.exaggeration_iterations) + "\n";
    if (k.seed) out += "seed = " + std::to_string(*k.seed) + "\n";
    return out;
}

// ------------------------------------------------------------ stages

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::synth: return "synth";
        case Stage::ingest: return "ingest";
        case Stage::train: return "train";
        case Stage::embed: return "embed";
        case Stage::cluster: return "cluster";
        case Stage::evaluate: return "evaluate";
        case Stage::report: return "report";
        case Stage::visualize: return "visualize";
    }
    throw std::invalid_argument("unknown stage");
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages{Stage::synth,   Stage::ingest,   Stage::train,  Stage::embed,
                                           Stage::cluster, Stage::evaluate, Stage::report, Stage::visualize};
    return stages;
}

Stage parse_stage(std::string_view name) {
    for (Stage s : all_stages()) {
        if (to_string(s) == name) return s;
    }
    throw std::invalid_argument("unknown stage '" + std::string(name) + "'");
}

StageError::StageError(Stage stage, const std::string& cause)
    : std::runtime_error("stage '" + to_string(stage) + "' failed: " + cause), stage_(stage) {}

std::string RunManifest::to_text() const {
    std::string out = "fsem-manifest 1\n";
    out += "toolkit " + toolkit_version + "\n";
    out += "config-sha256 " + config_sha256 + "\n";
    for (const auto& [stage, seconds] : stage_seconds) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " %.3f\n", seconds);
        out += "stage " + stage + buf;
    }
    for (const ManifestArtifact& a : artifacts) out += "artifact " + a.sha256 + " " + a.path + "\n";
    return out;
}

RunManifest RunManifest::from_text(std::string_view text) {
    RunManifest m;
    std::stringstream ss{std::string(text)};
    std::string line;
    if (!std::getline(ss, line) || line != "fsem-manifest 1") throw std::runtime_error("manifest: bad header");
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        const std::string key = line.substr(0, sp), rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (key == "toolkit") {
            m.toolkit_version = rest;
        } else if (key == "config-sha256") {
            m.config_sha256 = rest;
        } else if (key == "stage") {
            const auto s2 = rest.find(' ');
            if (s2 == std::string::npos) throw std::runtime_error("manifest: bad stage line '" + line + "'");
            m.stage_seconds.emplace_back(rest.substr(0, s2), std::stod(rest.substr(s2 + 1)));
        } else if (key == "artifact") {
            const auto s2 = rest.find(' ');
            if (s2 == std::string::npos) throw std::runtime_error("manifest: bad artifact line '" + line + "'");
            m.artifacts.push_back({rest.substr(s2 + 1), rest.substr(0, s2)});
        } else {
            throw std::runtime_error("manifest: unknown line '" + line + "'");
        }
    }
    return m;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

RunManifest read_manifest(const fs::path& output) { return RunManifest::from_text(read_text(output / "manifest.txt")); }

std::vector<std::string> verify_manifest(const fs::path& output) {
    std::vector<std::string> bad;
    for (const ManifestArtifact& a : read_manifest(output).artifacts) {
        const fs::path p = output / a.path;
        if (!fs::is_regular_file(p) || sha256_file(p) != a.sha256) bad.push_back(a.path);
    }
    return bad;
}

RunManifest run_stage(const ExperimentConfig& config, Stage stage) {
    const Layout L{config.output};
    const auto start = std::chrono::steady_clock::now();
    try {
        config.validate();
        fs::create_directories(L.root);
        write_text(L.config(), config.to_text());
        switch (stage) {
            case Stage::synth: stage_synth(config, L); break;
            case Stage::ingest: stage_ingest(config, L); break;
            case Stage::train: stage_train(config, L); break;
            case Stage::embed: stage_embed(config, L); break;
            case Stage::cluster: stage_cluster(config, L); break;
            case Stage::evaluate: stage_evaluate(config, L); break;
            case Stage::report: stage_report(config, L); break;
            case Stage::visualize: stage_visualize(config, L); break;
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunManifest previous;
    if (fs::exists(L.manifest())) {
        try {
            previous = read_manifest(L.root);
        } catch (const std::exception&) {
            previous = RunManifest{};
        }
    }
    // keep stage timings in pipeline order
    std::map<std::string, double> times(previous.stage_seconds.begin(), previous.stage_seconds.end());
    times[to_string(stage)] = seconds;
    previous.stage_seconds.clear();
    for (Stage s : all_stages()) {
        if (times.count(to_string(s))) previous.stage_seconds.emplace_back(to_string(s), times[to_string(s)]);
    }
    RunManifest m = scan(config, L, previous);
    write_text(L.manifest(), m.to_text());
    return m;
}

RunManifest run_experiment(const ExperimentConfig& config) {
    config.validate();
    fs::remove_all(fs::path(config.output) / "manifest.txt");
    RunManifest m;
    for (Stage s : all_stages()) m = run_stage(config, s);
    return m;
}

}  // namespace fsem

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <set>

#include "fsem/image_io.hpp"
#include "fsem/sampling.hpp"
#include "fsem/transform.hpp"
#include "test_util.hpp"

using namespace fsem;
using fsem::testing::TempDir;

namespace {

ImageSample random_image(std::size_t h, std::size_t w, std::size_t c, std::uint64_t seed, std::size_t label = 0) {
    Tensor<float> px({h, w, c});
    Rng rng(seed);
    for (float& v : px.values()) v = static_cast<float>(rng.uniform());
    return {px, label, "img" + std::to_string(seed)};
}

LabeledDataset balanced(std::size_t categories, std::size_t per_category, std::size_t side = 4) {
    LabeledDataset ds;
    for (std::size_t c = 0; c < categories; ++c) {
        ds.category_names.push_back("c" + std::to_string(c));
        for (std::size_t k = 0; k < per_category; ++k) ds.samples.push_back(random_image(side, side, 1, c * 1000 + k, c));
    }
    return ds;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
}

}  // namespace

TEST_CASE("load_dataset follows the directory contract") {
    TempDir dir("load");
    std::filesystem::create_directories(dir.path() / "normal");
    std::filesystem::create_directories(dir.path() / "covid");
    const Tensor<float> px({2, 2, 1}, 0.5f);
    write_pnm(dir.path() / "covid" / "a.pgm", px);
    write_pnm(dir.path() / "covid" / "b.pgm", px);
    for (int i = 0; i < 3; ++i) write_pnm(dir.path() / "normal" / ("n" + std::to_string(i) + ".pgm"), px);
    write_text(dir.path() / "normal" / "README.txt", "ignored");

    const LabeledDataset ds = load_dataset(dir.path());
    CHECK(ds.size() == 5);
    CHECK(ds.category_names == std::vector<std::string>{"covid", "normal"});
    CHECK(ds.category_counts() == std::vector<std::size_t>{2, 3});
    ds.validate();
}

TEST_CASE("PNM max-value scaling") {
    TempDir dir("pnm");
    SUBCASE("8-bit PGM of 255 is exactly 1.0") {
        std::string body = "P5\n# comment\n3 2\n255\n" + std::string(6, static_cast<char>(255));
        write_text(dir.path() / "white.pgm", body);
        const auto px = read_pnm(dir.path() / "white.pgm");
        CHECK(px.shape() == Shape{2, 3, 1});
        for (float v : px.values()) CHECK(v == 1.0f);
    }
    SUBCASE("16-bit PPM value 32768") {
        std::string body = "P6\n1 1\n65535\n";
        for (int k = 0; k < 3; ++k) body += std::string{static_cast<char>(0x80), static_cast<char>(0x00)};
        write_text(dir.path() / "mid.ppm", body);
        const auto px = read_pnm(dir.path() / "mid.ppm");
        CHECK(px.shape() == Shape{1, 1, 3});
        CHECK(px[0] == static_cast<float>(32768.0 / 65535.0));
        CHECK(px[0] == doctest::Approx(0.50001).epsilon(1e-5));
    }
    SUBCASE("ASCII PGM") {
        write_text(dir.path() / "a.pgm", "P2 2 1 4\n0 4\n");
        const auto px = read_pnm(dir.path() / "a.pgm");
        CHECK(px[0] == 0.0f);
        CHECK(px[1] == 1.0f);
    }
}

TEST_CASE("load_dataset error paths") {
    TempDir dir("load_errors");
    CHECK_THROWS_AS(load_dataset(dir.path()), std::runtime_error);

    std::filesystem::create_directories(dir.path() / "a");
    std::filesystem::create_directories(dir.path() / "b");
    write_pnm(dir.path() / "a" / "x.pgm", Tensor<float>({2, 2, 1}, 0.0f));
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("empty category"), std::runtime_error);

    write_text(dir.path() / "b" / "broken.pgm", "P5\n4 4\n255\n\x01\x02");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("broken.pgm"), std::runtime_error);
}

TEST_CASE("colour images are averaged unless passthrough") {
    TempDir dir("color");
    for (const char* name : {"x", "y"}) {
        std::filesystem::create_directories(dir.path() / name);
        write_text(dir.path() / name / "c.ppm", std::string("P3 1 1 255\n255 0 0\n"));
    }
    const auto gray = load_dataset(dir.path());
    CHECK(gray.samples[0].channels() == 1);
    CHECK(gray.samples[0].pixels[0] == static_cast<float>(1.0 / 3.0));
    const auto color = load_dataset(dir.path(), {ColorPolicy::passthrough});
    CHECK(color.samples[0].channels() == 3);
}

TEST_CASE("raw-tensor container round-trip is bit-identical") {
    TempDir dir("fsdt");
    LabeledDataset ds = balanced(3, 4, 5);
    ds.samples[2].pixels[0] = 0.1f + 1e-8f;
    save_dataset(dir.path(), ds);
    const LabeledDataset back = load_dataset(dir.path());
    REQUIRE(back.size() == ds.size());
    CHECK(back.category_names == ds.category_names);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.samples[i].label == ds.samples[i].label);
        CHECK(back.samples[i].pixels == ds.samples[i].pixels);
    }
    CHECK_THROWS_AS(read_tensor_container(dir.path() / "missing.fsdt"), std::runtime_error);
}

TEST_CASE("resize") {
    SUBCASE("identity") {
        const auto img = random_image(7, 5, 1, 3);
        CHECK(resize(img, 7, 5).pixels == img.pixels);
    }
    SUBCASE("constant field from 1x1") {
        const ImageSample one{Tensor<float>({1, 1, 1}, 0.3f), 0, "one"};
        const auto out = resize(one, 4, 6);
        CHECK(out.pixels.shape() == Shape{4, 6, 1});
        for (float v : out.pixels.values()) CHECK(v == 0.3f);
    }
    SUBCASE("corner-aligned midpoint") {
        const ImageSample two{Tensor<float>({2, 1, 1}, std::vector<float>{0.0f, 1.0f}), 0, "two"};
        const auto out = resize(two, 3, 1);
        CHECK(out.pixels == Tensor<float>({3, 1, 1}, std::vector<float>{0.0f, 0.5f, 1.0f}));
    }
    CHECK_THROWS_AS(resize(random_image(2, 2, 1, 1), 0, 3), std::invalid_argument);
}

TEST_CASE("augment with degenerate ranges is the identity") {
    const auto img = random_image(9, 9, 1, 4);
    AugmentParams p;
    p.rotation_deg = 0.0;
    p.shear = 0.0;
    p.zoom_min = p.zoom_max = 1.0;
    p.seed = 123;
    CHECK(augment(img, p).pixels == img.pixels);
}

TEST_CASE("quarter-turn rotation maps the lattice exactly") {
    for (std::size_t n : {4u, 5u}) {
        const auto img = random_image(n, n, 1, 40 + n);
        const auto once = affine_warp(img, {90.0, 0.0, 1.0});
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t x = 0; x < n; ++x) CHECK(once.pixels[y * n + x] == img.pixels[(n - 1 - x) * n + y]);
        }
        ImageSample turned = img;
        for (int k = 0; k < 4; ++k) turned = affine_warp(turned, {90.0, 0.0, 1.0});
        CHECK(turned.pixels == img.pixels);
    }
}

TEST_CASE("augment is seeded and closed over [0,1]") {
    AugmentParams p;
    p.rotation_deg = 30.0;
    p.shear = 0.3;
    p.zoom_min = 0.7;
    p.zoom_max = 1.4;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto img = random_image(8, 6, seed % 2 ? 3 : 1, seed, 2);
        p.seed = seed;
        p.fill = seed % 3 ? BoundaryFill::edge : BoundaryFill::constant;
        const auto a = augment(img, p);
        CHECK(a.pixels == augment(img, p).pixels);
        CHECK(a.pixels.shape() == img.pixels.shape());
        CHECK(a.label == 2);
        for (float v : a.pixels.values()) CHECK((v >= 0.0f && v <= 1.0f));
    }
    p.rotation_deg = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("expand_dataset") {
    const LabeledDataset ds = balanced(3, 100);
    AugmentParams p;
    p.seed = 9;
    CHECK(expand_dataset(ds, 0.0, p) == ds);

    const LabeledDataset grown = expand_dataset(ds, 0.10, p);
    CHECK(grown.size() == 330);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(grown.samples[i] == ds.samples[i]);
    CHECK(grown.category_counts() == std::vector<std::size_t>{110, 110, 110});
    for (std::size_t i = ds.size(); i < grown.size(); ++i) {
        const std::string& id = grown.samples[i].source_id;
        const std::string origin = id.substr(0, id.find('#'));
        for (const auto& s : ds.samples) {
            if (s.source_id == origin) CHECK(s.label == grown.samples[i].label);
        }
    }

    // Unbalanced categories: appended counts stay within 1 of fraction * N_c.
    LabeledDataset skewed = balanced(3, 10);
    for (std::size_t k = 0; k < 27; ++k) skewed.samples.push_back(random_image(4, 4, 1, 5000 + k, 1));
    const LabeledDataset more = expand_dataset(skewed, 0.25, p);
    const auto before = skewed.category_counts(), after = more.category_counts();
    CHECK(more.size() - skewed.size() == 14);
    for (std::size_t c = 0; c < 3; ++c) {
        const double expected = 0.25 * static_cast<double>(before[c]);
        CHECK(std::abs(static_cast<double>(after[c] - before[c]) - expected) <= 1.0);
    }
}

TEST_CASE("split examples") {
    auto ds = std::make_shared<const LabeledDataset>(balanced(3, 10));
    const SplitDataset s = split(ds, {}, 5);
    CHECK(s.train.size() == 18);
    CHECK(s.validation.size() == 6);
    CHECK(s.test.size() == 6);
    const SplitDataset again = split(ds, {}, 5);
    CHECK(again.train == s.train);
    CHECK(again.validation == s.validation);
    CHECK(again.test == s.test);

    LabeledDataset nine = balanced(2, 9);
    auto thirds = split(std::make_shared<const LabeledDataset>(nine), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1);
    CHECK(thirds.train.size() == 6);
    CHECK(thirds.validation.size() == 6);
    CHECK(thirds.test.size() == 6);
}

TEST_CASE("split errors") {
    auto ds = std::make_shared<const LabeledDataset>(balanced(2, 10));
    CHECK_THROWS_AS(split(ds, {0.5, 0.3, 0.3}, 0), std::invalid_argument);
    CHECK_THROWS_AS(split(ds, {0.8, 0.2, 0.0}, 0), std::invalid_argument);
    LabeledDataset small = balanced(2, 10);
    small.samples.erase(small.samples.begin() + 12, small.samples.end());
    CHECK_THROWS_WITH_AS(split(std::make_shared<const LabeledDataset>(small), {}, 0), doctest::Contains("c1 (2)"),
                         std::invalid_argument);
}

TEST_CASE("split partition and stratification properties") {
    Rng meta(2024);
    for (int trial = 0; trial < 200; ++trial) {
        LabeledDataset ds;
        const std::size_t categories = 2 + meta.below(4);
        for (std::size_t c = 0; c < categories; ++c) {
            ds.category_names.push_back("k" + std::to_string(c));
            const std::size_t n = 5 + meta.below(40);
            for (std::size_t k = 0; k < n; ++k) ds.samples.push_back({Tensor<float>({1, 1, 1}), c, ""});
        }
        // interleave labels so category members are not contiguous
        Rng(trial).shuffle(std::span<ImageSample>(ds.samples));
        const SplitRatios ratios{0.6, 0.2, 0.2};
        auto shared = std::make_shared<const LabeledDataset>(ds);
        const SplitDataset s = split(shared, ratios, meta.next_u64());

        std::vector<int> seen(ds.size(), 0);
        for (const auto* part : {&s.train, &s.validation, &s.test}) {
            for (std::size_t i : *part) ++seen[i];
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));

        const auto counts = ds.category_counts();
        const std::pair<const std::vector<std::size_t>*, double> parts[] = {
            {&s.train, ratios.train}, {&s.validation, ratios.validation}, {&s.test, ratios.test}};
        for (const auto& [part, ratio] : parts) {
            std::vector<std::size_t> per(categories, 0);
            for (std::size_t i : *part) ++per[ds.samples[i].label];
            for (std::size_t c = 0; c < categories; ++c) {
                CHECK(std::abs(static_cast<double>(per[c]) - ratio * static_cast<double>(counts[c])) <= 1.0);
            }
        }
    }
}

TEST_CASE("sample_pairs") {
    const LabeledDataset ds = balanced(3, 5);
    const PairBatch b = sample_pairs(ds, 10, 0.5, 3);
    REQUIRE(b.pairs.size() == 10);
    CHECK(std::count_if(b.pairs.begin(), b.pairs.end(), [](const SamplePair& p) { return p.same; }) == 5);
    CHECK(sample_pairs(ds, 10, 0.5, 3).pairs == b.pairs);

    LabeledDataset one = balanced(1, 5);
    one.category_names.push_back("empty");
    CHECK_THROWS_AS(sample_pairs(one, 10, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_pairs(ds, 10, 1.0, 1), std::invalid_argument);
}

TEST_CASE("pair soundness over 1000 seeds") {
    LabeledDataset ds = balanced(4, 3);
    for (std::size_t k = 0; k < 5; ++k) ds.samples.push_back(random_image(4, 4, 1, 777 + k, 2));
    const auto labels = ds.labels();
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const PairBatch b = sample_pairs(ds, 16, 0.3, seed);
        for (const SamplePair& p : b.pairs) {
            CHECK(p.first != p.second);
            CHECK(p.same == (labels[p.first] == labels[p.second]));
        }
    }
}

TEST_CASE("positive pairs are uniform over same-category ordered pairs") {
    // Category sizes 2 and 4: 2 + 12 ordered positive pairs.
    LabeledDataset ds;
    ds.category_names = {"a", "b"};
    for (std::size_t k = 0; k < 6; ++k) ds.samples.push_back({Tensor<float>({1, 1, 1}), k < 2 ? 0u : 1u, ""});
    std::size_t from_a = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        for (const SamplePair& p : sample_pairs(ds, 20, 0.5, seed).pairs) {
            if (!p.same) continue;
            ++total;
            from_a += ds.samples[p.first].label == 0 ? 1 : 0;
        }
    }
    CHECK(static_cast<double>(from_a) / static_cast<double>(total) == doctest::Approx(2.0 / 14.0).epsilon(0.1));
}

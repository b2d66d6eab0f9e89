#include "fsem/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fsem/binary.hpp"

namespace fsem {

namespace fs = std::filesystem;

namespace {

class PnmParser {
public:
    PnmParser(std::string bytes, std::string source) : bytes_(std::move(bytes)), source_(std::move(source)) {}

    std::string magic() {
        if (bytes_.size() < 2) fail("truncated header");
        pos_ = 2;
        return bytes_.substr(0, 2);
    }

    std::uint32_t header_int() {
        skip_space_and_comments();
        return read_int();
    }

    std::uint32_t ascii_int() {
        skip_space_and_comments();
        return read_int();
    }

    // Exactly one whitespace byte separates the header from binary data.
    void end_header() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            fail("malformed header");
        }
        ++pos_;
    }

    std::uint32_t binary_sample(bool wide) {
        if (pos_ + (wide ? 2 : 1) > bytes_.size()) fail("truncated pixel data");
        const auto hi = static_cast<unsigned char>(bytes_[pos_++]);
        if (!wide) return hi;
        const auto lo = static_cast<unsigned char>(bytes_[pos_++]);
        return static_cast<std::uint32_t>(hi) << 8 | lo;
    }

    [[noreturn]] void fail(const std::string& what) const { throw std::runtime_error(source_ + ": " + what); }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint32_t read_int() {
        if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            fail(pos_ >= bytes_.size() ? "truncated file" : "expected an integer");
        }
        std::uint64_t v = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_++] - '0');
            if (v > 0xffffffffULL) fail("integer overflow in header");
        }
        return static_cast<std::uint32_t>(v);
    }

    std::string bytes_;
    std::string source_;
    std::size_t pos_ = 0;
};

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error(path.string() + ": cannot open file");
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

std::string lowercase_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

Tensor<float> apply_color_policy(Tensor<float> pixels, ColorPolicy policy) {
    if (policy == ColorPolicy::passthrough || pixels.dim(2) == 1) return pixels;
    const std::size_t h = pixels.dim(0), w = pixels.dim(1), c = pixels.dim(2);
    Tensor<float> gray({h, w, 1});
    for (std::size_t i = 0; i < h * w; ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < c; ++k) total += pixels[i * c + k];
        gray[i] = static_cast<float>(total / static_cast<double>(c));
    }
    return gray;
}

}  // namespace

Tensor<float> read_pnm(const fs::path& path) {
    PnmParser p(slurp(path), path.string());
    const std::string magic = p.magic();
    std::size_t channels = 0;
    bool ascii = false;
    if (magic == "P2" || magic == "P5") channels = 1;
    if (magic == "P3" || magic == "P6") channels = 3;
    if (channels == 0) p.fail("unsupported PNM magic '" + magic + "'");
    ascii = magic == "P2" || magic == "P3";

    const std::uint32_t width = p.header_int();
    const std::uint32_t height = p.header_int();
    const std::uint32_t maxval = p.header_int();
    if (width == 0 || height == 0) p.fail("zero image dimension");
    if (maxval == 0 || maxval > 65535) p.fail("maxval " + std::to_string(maxval) + " outside 1..65535");
    if (!ascii) p.end_header();

    Tensor<float> pixels({height, width, channels});
    const double scale = static_cast<double>(maxval);
    for (float& v : pixels.values()) {
        const std::uint32_t raw = ascii ? p.ascii_int() : p.binary_sample(maxval > 255);
        if (raw > maxval) p.fail("sample exceeds maxval");
        v = static_cast<float>(static_cast<double>(raw) / scale);
    }
    return pixels;
}

void write_pnm(const fs::path& path, const Tensor<float>& pixels, std::uint32_t maxval) {
    if (pixels.rank() != 3 || (pixels.dim(2) != 1 && pixels.dim(2) != 3)) {
        throw std::invalid_argument("write_pnm: expected [H x W x 1] or [H x W x 3]");
    }
    if (maxval == 0 || maxval > 65535) throw std::invalid_argument("write_pnm: maxval outside 1..65535");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error(path.string() + ": cannot open for writing");
    os << (pixels.dim(2) == 1 ? "P5" : "P6") << '\n' << pixels.dim(1) << ' ' << pixels.dim(0) << '\n' << maxval << '\n';
    for (float v : pixels.values()) {
        const auto q = static_cast<std::uint32_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * static_cast<float>(maxval)));
        if (maxval > 255) os.put(static_cast<char>(q >> 8));
        os.put(static_cast<char>(q & 0xff));
    }
    if (!os) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<ImageSample> read_tensor_container(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error(path.string() + ": cannot open file");
    BinaryReader r(is, path.string());
    if (r.tag() != "FSDT") r.fail("not a tensor container (bad magic)");
    const std::uint32_t version = r.u32();
    if (version != kTensorContainerVersion) r.fail("unsupported container version " + std::to_string(version));
    const std::uint32_t count = r.u32();
    std::vector<ImageSample> samples;
    samples.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        ImageSample s;
        s.label = r.u32();
        const std::uint32_t h = r.u32(), w = r.u32(), c = r.u32();
        if (h == 0 || w == 0 || c == 0) r.fail("sample " + std::to_string(i) + " has a zero dimension");
        s.pixels = Tensor<float>({h, w, c});
        for (float& v : s.pixels.values()) v = r.f32();
        s.source_id = path.filename().string() + "#" + std::to_string(i);
        samples.push_back(std::move(s));
    }
    return samples;
}

void write_tensor_container(const fs::path& path, const std::vector<ImageSample>& samples) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error(path.string() + ": cannot open for writing");
    BinaryWriter w(os);
    w.tag("FSDT");
    w.u32(kTensorContainerVersion);
    w.u32(static_cast<std::uint32_t>(samples.size()));
    for (const ImageSample& s : samples) {
        w.u32(static_cast<std::uint32_t>(s.label));
        w.u32(static_cast<std::uint32_t>(s.height()));
        w.u32(static_cast<std::uint32_t>(s.width()));
        w.u32(static_cast<std::uint32_t>(s.channels()));
        for (float v : s.pixels.values()) w.f32(v);
    }
    if (!os) throw std::runtime_error(path.string() + ": write failed");
}

LabeledDataset load_dataset(const fs::path& root, const LoadOptions& options) {
    if (!fs::is_directory(root)) throw std::runtime_error(root.string() + ": not a directory");
    std::vector<fs::path> categories;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) categories.push_back(entry.path());
    }
    if (categories.empty()) throw std::runtime_error(root.string() + ": no category subdirectories");
    std::sort(categories.begin(), categories.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    LabeledDataset ds;
    for (std::size_t label = 0; label < categories.size(); ++label) {
        const fs::path& dir = categories[label];
        ds.category_names.push_back(dir.filename().string());
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::size_t loaded = 0;
        for (const fs::path& file : files) {
            const std::string ext = lowercase_extension(file);
            if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
                ds.samples.push_back({apply_color_policy(read_pnm(file), options.color), label, file.string()});
                ++loaded;
            } else if (ext == ".fsdt") {
                for (ImageSample& s : read_tensor_container(file)) {
                    s.label = label;
                    s.pixels = apply_color_policy(std::move(s.pixels), options.color);
                    s.source_id = (dir.filename() / s.source_id).string();
                    ds.samples.push_back(std::move(s));
                    ++loaded;
                }
            }
        }
        if (loaded == 0) throw std::runtime_error(dir.string() + ": empty category directory");
    }
    return ds;
}

void save_dataset(const fs::path& root, const LabeledDataset& ds) {
    if (!std::is_sorted(ds.category_names.begin(), ds.category_names.end())) {
        throw std::invalid_argument("save_dataset: category names must be in lexicographic order");
    }
    for (std::size_t c = 0; c < ds.category_count(); ++c) {
        const fs::path dir = root / ds.category_names[c];
        fs::create_directories(dir);
        std::vector<ImageSample> members;
        for (const ImageSample& s : ds.samples) {
            if (s.label == c) members.push_back(s);
        }
        write_tensor_container(dir / "samples.fsdt", members);
    }
}

}  // namespace fsem

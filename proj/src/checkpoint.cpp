#include "fsem/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "fsem/binary.hpp"

namespace fsem {

void write_network(std::ostream& os, const Network<float>& net, const std::vector<CheckpointBlock>& blocks) {
    BinaryWriter w(os);
    w.tag("FSEM");
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(net.input_shape().size()));
    for (std::size_t d : net.input_shape()) w.u32(static_cast<std::uint32_t>(d));
    w.u32(static_cast<std::uint32_t>(net.size()));
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Layer<float>& layer = net.layer(i);
        w.u32(static_cast<std::uint32_t>(layer.kind()));
        w.u8(net.frozen(i) ? 1 : 0);
        const LayerConfig cfg = layer.config();
        w.u32(static_cast<std::uint32_t>(cfg.size()));
        for (std::uint32_t c : cfg) w.u32(c);
        const auto params = layer.parameters();
        w.u32(static_cast<std::uint32_t>(params.size()));
        for (const Tensor<float>* p : params) {
            w.u32(static_cast<std::uint32_t>(p->rank()));
            for (std::size_t d : p->shape()) w.u32(static_cast<std::uint32_t>(d));
            for (float v : p->values()) w.f32(v);
        }
    }
    w.u32(static_cast<std::uint32_t>(blocks.size()));
    for (const CheckpointBlock& b : blocks) {
        if (b.tag.size() != 4) throw std::invalid_argument("checkpoint block tag must be 4 characters: " + b.tag);
        w.tag(b.tag);
        w.u32(static_cast<std::uint32_t>(b.payload.size()));
        w.bytes(b.payload.data(), b.payload.size());
    }
    if (!os) throw std::runtime_error("write_network: stream write failed");
}

Network<float> read_network(std::istream& is, const std::string& source, std::vector<CheckpointBlock>* blocks) {
    BinaryReader r(is, source);
    if (r.tag() != "FSEM") r.fail("not a network checkpoint (bad magic)");
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) r.fail("unsupported checkpoint version " + std::to_string(version));

    Shape input(r.u32());
    for (auto& d : input) d = r.u32();
    Network<float> net(input);
    const std::uint32_t layers = r.u32();
    for (std::uint32_t i = 0; i < layers; ++i) {
        const auto kind = static_cast<LayerKind>(r.u32());
        const bool frozen = r.u8() != 0;
        LayerConfig cfg(r.u32());
        for (auto& c : cfg) c = r.u32();
        auto layer = make_layer<float>(kind, cfg);
        auto params = layer->parameters();
        if (r.u32() != params.size()) r.fail("layer " + std::to_string(i) + ": parameter count mismatch");
        for (Tensor<float>* p : params) {
            Shape shape(r.u32());
            for (auto& d : shape) d = r.u32();
            if (shape != p->shape()) {
                r.fail("layer " + std::to_string(i) + ": parameter shape " + shape_to_string(shape) +
                       " does not match layer config " + shape_to_string(p->shape()));
            }
            for (float& v : p->values()) v = r.f32();
        }
        net.add(std::move(layer), frozen);
    }
    const std::uint32_t count = r.u32();
    for (std::uint32_t b = 0; b < count; ++b) {
        CheckpointBlock block;
        block.tag = r.tag();
        block.payload.resize(r.u32());
        r.bytes(block.payload.data(), block.payload.size());
        if (blocks) blocks->push_back(std::move(block));
    }
    return net;
}

void save_network(const std::filesystem::path& path, const Network<float>& net,
                  const std::vector<CheckpointBlock>& blocks) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_network(os, net, blocks);
}

Network<float> load_network(const std::filesystem::path& path, std::vector<CheckpointBlock>* blocks) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_network(is, path.string(), blocks);
}

}  // namespace fsem

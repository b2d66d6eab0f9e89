#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsem/network.hpp"

namespace fsem {

/// Versioned network container.
///
///   "FSEM"  u32 version
///   u32 input-rank, u32 dims...
///   u32 layer-count
///   per layer: u32 kind, u8 frozen, u32 n, u32 config[n],
///              u32 param-count, per param: u32 rank, u32 dims..., f32 payload
///   u32 block-count, per block: 4-byte tag, u32 length, payload bytes
///
/// All integers and floats are little-endian. Trailing tagged blocks carry
/// extensions (model metadata, prototypes); readers skip tags they do not
/// know.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointBlock {
    std::string tag;  ///< exactly four characters
    std::vector<std::uint8_t> payload;
};

void write_network(std::ostream& os, const Network<float>& net, const std::vector<CheckpointBlock>& blocks = {});
Network<float> read_network(std::istream& is, const std::string& source = "<stream>",
                            std::vector<CheckpointBlock>* blocks = nullptr);

void save_network(const std::filesystem::path& path, const Network<float>& net,
                  const std::vector<CheckpointBlock>& blocks = {});
Network<float> load_network(const std::filesystem::path& path, std::vector<CheckpointBlock>* blocks = nullptr);

}  // namespace fsem

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "airgan/nn/network.hpp"

namespace airgan::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout (little-endian): magic "AGNN", version, input width, layer
/// count; per layer a kind tag, input and output widths and a float64
/// hyper-parameter slot (slope, or epsilon and momentum); then every
/// parameter block as row-major float32.
void write_network(std::ostream& out, const Network& network);
Network read_network(std::istream& in);

void save_network(const std::filesystem::path& path, const Network& network);
Network load_network(const std::filesystem::path& path);

}  // namespace airgan::nn

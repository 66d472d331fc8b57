// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace escale::storage {

// Block compressor, identified in the file header by its byte value.
enum class Codec : std::uint8_t { none = 0, zlib = 1 };

std::string_view to_string(Codec codec);

std::vector<std::byte> compress(Codec codec, std::span<const std::byte> input);

// Throws StoreCorrupt if the stream is malformed or does not inflate to
// exactly `expected_size` bytes.
std::vector<std::byte> decompress(Codec codec, std::span<const std::byte> input,
                                  std::size_t expected_size);

std::uint32_t crc32(std::span<const std::byte> bytes, std::uint32_t seed = 0);

}  // namespace escale::storage

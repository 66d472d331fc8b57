// SPDX-License-Identifier: Apache-2.0
#include "escale/storage/codec.hpp"

#include <zlib.h>

#include <stdexcept>
#include <string>

#include "escale/storage/store.hpp"

namespace escale::storage {

std::string_view to_string(Codec codec) {
  switch (codec) {
    case Codec::none: return "none";
    case Codec::zlib: return "zlib";
  }
  return "unknown";
}

std::vector<std::byte> compress(Codec codec, std::span<const std::byte> input) {
  if (codec == Codec::none) return {input.begin(), input.end()};
  uLongf bound = compressBound(static_cast<uLong>(input.size()));
  std::vector<std::byte> out(bound);
  const int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                           reinterpret_cast<const Bytef*>(input.data()),
                           static_cast<uLong>(input.size()), Z_DEFAULT_COMPRESSION);
  if (rc != Z_OK) throw std::runtime_error("zlib compression failed (code " + std::to_string(rc) + ")");
  out.resize(bound);
  return out;
}

std::vector<std::byte> decompress(Codec codec, std::span<const std::byte> input,
                                  std::size_t expected_size) {
  if (codec == Codec::none) {
    if (input.size() != expected_size) throw StoreCorrupt("stored block has the wrong length");
    return {input.begin(), input.end()};
  }
  if (codec != Codec::zlib) throw StoreCorrupt("unknown codec");
  std::vector<std::byte> out(expected_size);
  uLongf size = static_cast<uLongf>(expected_size);
  const int rc = uncompress(reinterpret_cast<Bytef*>(out.data()), &size,
                            reinterpret_cast<const Bytef*>(input.data()),
                            static_cast<uLong>(input.size()));
  if (rc != Z_OK || size != expected_size) {
    throw StoreCorrupt("block does not inflate to its recorded size (zlib code " +
                       std::to_string(rc) + ")");
  }
  return out;
}

std::uint32_t crc32(std::span<const std::byte> bytes, std::uint32_t seed) {
  // zlib treats a null buffer as "return the initial value" and drops the seed.
  if (bytes.empty()) return seed;
  return static_cast<std::uint32_t>(::crc32(seed, reinterpret_cast<const Bytef*>(bytes.data()),
                                            static_cast<uInt>(bytes.size())));
}

}  // namespace escale::storage

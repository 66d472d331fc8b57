// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "escale/clustering/clustered_database.hpp"
#include "escale/search/search.hpp"
#include "escale/storage/byte_source.hpp"
#include "escale/storage/codec.hpp"

namespace escale::storage {

// Raised for any integrity failure: bad magic, checksum mismatch, a block
// that will not inflate, inconsistent counts.
class StoreCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// On-disk layout, all integers little-endian, reals as IEEE-754 binary64:
//
//   header        64 bytes (see StoreHeader / docs/FORMAT.md)
//   index         k entries of kIndexEntryBytes
//   centers       k x dimension f64, uncompressed
//   blocks        one compressed block per cluster, in cluster order
//
// A block inflates to member_count records of (u64 id, dimension x f64),
// center first.
inline constexpr std::array<char, 8> kMagic{'E', 'S', 'C', 'L', 'S', 'T', 'O', 'R'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 64;
inline constexpr std::size_t kIndexEntryBytes = 48;  // the per-cluster overhead kappa

struct StoreHeader {
  std::uint32_t version = kFormatVersion;
  DistanceKind distance = DistanceKind::euclidean;
  Codec codec = Codec::zlib;
  std::uint32_t dimension = 0;
  double r_c = 0.0;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::uint64_t permutation_seed = 0;
};

struct ClusterIndexEntry {
  std::uint64_t cluster_id = 0;
  std::uint64_t byte_offset = 0;
  std::uint64_t compressed_length = 0;
  std::uint64_t member_count = 0;
  std::uint64_t center_id = 0;
  std::uint32_t block_crc = 0;
};

struct CompressionStats {
  std::uint64_t s_orig_bytes = 0;             // raw serialized dataset (ids + coords)
  std::uint64_t s_orig_compressed_bytes = 0;  // same bytes, id order, compressed as one stream
  std::uint64_t s_clust_bytes = 0;            // sum of compressed cluster blocks
  std::uint64_t index_bytes = 0;              // kappa * k
  std::uint64_t centers_bytes = 0;
  std::uint64_t file_bytes = 0;
  double ratio = 1.0;  // s_clust / s_orig; 1 for an empty index
};

// Serializes the index. Written to a sibling temp file and renamed into
// place, so `path` is either untouched or complete.
CompressionStats write_database(const ClusteredDatabase& db, const std::filesystem::path& path,
                                Codec codec = Codec::zlib);

// One decompressed cluster.
struct StoredCluster {
  std::uint64_t cluster_id = 0;
  PointId center_id = 0;
  std::size_t dimension = 0;
  std::vector<PointId> ids;  // center first
  std::vector<double> coords;

  std::size_t size() const { return ids.size(); }
  Point point(std::size_t i) const;
};

// Read-only view of a database file. Header, index and centers are read
// at open; blocks are fetched by byte range on demand. Safe for
// concurrent readers.
class CompressedStore {
 public:
  static CompressedStore open(const std::filesystem::path& path);
  static CompressedStore open(std::unique_ptr<ByteSource> source);

  const StoreHeader& header() const { return header_; }
  std::span<const ClusterIndexEntry> index() const { return index_; }
  std::span<const double> center_coords() const { return centers_; }
  std::span<const double> center_norms() const { return center_norms_; }
  const DistanceFunction& distance_function() const { return distance_; }
  std::size_t k() const { return index_.size(); }
  std::size_t size() const { return header_.n; }
  std::size_t dimension() const { return header_.dimension; }
  std::uint64_t blocks_offset() const { return blocks_offset_; }

  // Reads exactly the block's byte range. Throws std::out_of_range for a
  // bad id and StoreCorrupt on checksum or decode failure.
  StoredCluster load_cluster(std::size_t cluster_id) const;

  std::uint64_t blocks_decompressed() const { return blocks_decompressed_.load(); }
  void reset_block_counter() { blocks_decompressed_.store(0); }

  const ByteSource& source() const { return *source_; }

  CompressedStore(CompressedStore&& other) noexcept;
  CompressedStore& operator=(CompressedStore&&) = delete;

 private:
  explicit CompressedStore(std::unique_ptr<ByteSource> source);

  std::unique_ptr<ByteSource> source_;
  StoreHeader header_;
  DistanceFunction distance_{DistanceDescriptor{}};
  std::vector<ClusterIndexEntry> index_;
  std::vector<double> centers_;
  std::vector<double> center_norms_;
  std::uint64_t blocks_offset_ = 0;
  mutable std::atomic<std::uint64_t> blocks_decompressed_{0};
};

// Coarse scan over the stored centers, then decompresses and scans only
// the candidate clusters. Hits equal search() on the in-memory index.
QueryResult search_on_store(const CompressedStore& store, std::span<const double> q, double r,
                            const SearchOptions& options = {}, EvalCounter* counter = nullptr);

// Loads every cluster back into an in-memory index.
ClusteredDatabase read_database(const CompressedStore& store);
ClusteredDatabase read_database(const std::filesystem::path& path);

}  // namespace escale::storage

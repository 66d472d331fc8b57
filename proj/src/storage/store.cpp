// SPDX-License-Identifier: Apache-2.0
#include "escale/storage/store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

namespace escale::storage {
namespace {

// Little-endian encoding, independent of host byte order.
class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(static_cast<std::byte>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(std::span<const std::byte> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }

  std::vector<std::byte>& bytes() { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
  }
  std::vector<std::byte> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::span<const std::byte> raw(std::size_t n) {
    need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void need(std::size_t n) const {
    if (n > bytes_.size() - pos_) throw StoreCorrupt("truncated record");
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t record_bytes(std::size_t dim) { return 8 + 8 * static_cast<std::uint64_t>(dim); }

void encode_header(Writer& w, const StoreHeader& h) {
  for (const char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(h.version);
  w.u8(static_cast<std::uint8_t>(h.distance));
  w.u8(static_cast<std::uint8_t>(h.codec));
  w.u16(0);
  w.u32(h.dimension);
  w.u32(static_cast<std::uint32_t>(kIndexEntryBytes));
  w.f64(h.r_c);
  w.u64(h.k);
  w.u64(h.n);
  w.u64(h.permutation_seed);
  // bytes 56..63: metadata crc + reserved, patched after the index is known
  w.u32(0);
  w.u32(0);
}

void encode_entry(Writer& w, const ClusterIndexEntry& e) {
  w.u64(e.cluster_id);
  w.u64(e.byte_offset);
  w.u64(e.compressed_length);
  w.u64(e.member_count);
  w.u64(e.center_id);
  w.u32(e.block_crc);
  w.u32(0);
}

void write_file_atomically(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move database into place at " + path.string());
  }
}

}  // namespace

CompressionStats write_database(const ClusteredDatabase& db, const std::filesystem::path& path,
                                Codec codec) {
  const std::size_t dim = db.dimension();
  const auto clusters = db.clusters();
  const std::uint64_t k = clusters.size();

  StoreHeader header;
  header.distance = db.distance().kind();
  header.codec = codec;
  header.dimension = static_cast<std::uint32_t>(dim);
  header.r_c = db.r_c();
  header.k = k;
  header.n = db.size();
  header.permutation_seed = db.permutation_seed();

  CompressionStats stats;
  std::vector<ClusterIndexEntry> index(k);
  std::vector<std::vector<std::byte>> blocks(k);
  const std::uint64_t blocks_offset = kHeaderBytes + kIndexEntryBytes * k + 8 * dim * k;
  std::uint64_t offset = blocks_offset;
  for (std::size_t ci = 0; ci < k; ++ci) {
    const Cluster& c = clusters[ci];
    Writer raw;
    for (std::size_t m = 0; m < c.size(); ++m) {
      raw.u64(c.member_ids[m]);
      for (const double v : c.member_coords(m, dim)) raw.f64(v);
    }
    blocks[ci] = compress(codec, raw.bytes());
    index[ci] = ClusterIndexEntry{ci, offset, blocks[ci].size(), c.size(), c.center_id,
                                  crc32(blocks[ci])};
    offset += blocks[ci].size();
    stats.s_clust_bytes += blocks[ci].size();
  }

  Writer out;
  encode_header(out, header);
  for (const auto& e : index) encode_entry(out, e);
  for (const Cluster& c : clusters) {
    for (const double v : c.member_coords(0, dim)) out.f64(v);
  }
  // The metadata checksum covers header bytes [0, 56), the index and the centers.
  std::uint32_t meta = crc32(std::span(out.bytes()).first(56));
  meta = crc32(std::span(out.bytes()).subspan(kHeaderBytes), meta);
  for (int i = 0; i < 4; ++i) out.bytes()[56 + static_cast<std::size_t>(i)] = static_cast<std::byte>((meta >> (8 * i)) & 0xff);
  for (const auto& b : blocks) out.raw(b);

  write_file_atomically(path, out.bytes());

  // Baseline: the same records in id order, compressed as one stream.
  std::vector<std::pair<PointId, std::span<const double>>> rows;
  rows.reserve(db.size());
  for (const Cluster& c : clusters) {
    for (std::size_t m = 0; m < c.size(); ++m) rows.emplace_back(c.member_ids[m], c.member_coords(m, dim));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Writer whole;
  for (const auto& [id, coords] : rows) {
    whole.u64(id);
    for (const double v : coords) whole.f64(v);
  }
  stats.s_orig_bytes = whole.size();
  stats.s_orig_compressed_bytes = rows.empty() ? 0 : compress(codec, whole.bytes()).size();
  stats.index_bytes = kIndexEntryBytes * k;
  stats.centers_bytes = 8 * dim * k;
  stats.file_bytes = out.size();
  stats.ratio = stats.s_orig_bytes == 0
                    ? 1.0
                    : static_cast<double>(stats.s_clust_bytes) / static_cast<double>(stats.s_orig_bytes);
  return stats;
}

Point StoredCluster::point(std::size_t i) const {
  const auto first = coords.begin() + static_cast<std::ptrdiff_t>(i * dimension);
  return Point{ids[i], std::vector<double>(first, first + static_cast<std::ptrdiff_t>(dimension))};
}

CompressedStore::CompressedStore(std::unique_ptr<ByteSource> source) : source_(std::move(source)) {}

CompressedStore::CompressedStore(CompressedStore&& other) noexcept
    : source_(std::move(other.source_)),
      header_(other.header_),
      distance_(other.distance_),
      index_(std::move(other.index_)),
      centers_(std::move(other.centers_)),
      center_norms_(std::move(other.center_norms_)),
      blocks_offset_(other.blocks_offset_),
      blocks_decompressed_(other.blocks_decompressed_.load()) {}

CompressedStore CompressedStore::open(const std::filesystem::path& path) {
  try {
    return open(std::make_unique<FileByteSource>(path));
  } catch (const StoreCorrupt& e) {
    throw StoreCorrupt(path.string() + ": " + e.what());
  }
}

CompressedStore CompressedStore::open(std::unique_ptr<ByteSource> source) {
  CompressedStore store(std::move(source));
  const ByteSource& src = *store.source_;
  if (src.size() < kHeaderBytes) throw StoreCorrupt("file too short for a database header");

  std::vector<std::byte> head(kHeaderBytes);
  src.read_at(0, head);
  Reader r(head);
  for (const char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw StoreCorrupt("not a database file (bad magic)");
  }
  StoreHeader& h = store.header_;
  h.version = r.u32();
  if (h.version != kFormatVersion) {
    throw StoreCorrupt("unsupported format version " + std::to_string(h.version));
  }
  const std::uint8_t kind = r.u8();
  if (kind > static_cast<std::uint8_t>(DistanceKind::jaccard)) throw StoreCorrupt("unknown distance kind");
  h.distance = static_cast<DistanceKind>(kind);
  const std::uint8_t codec = r.u8();
  if (codec > static_cast<std::uint8_t>(Codec::zlib)) throw StoreCorrupt("unknown codec");
  h.codec = static_cast<Codec>(codec);
  r.u16();
  h.dimension = r.u32();
  if (r.u32() != kIndexEntryBytes) throw StoreCorrupt("unexpected index entry size");
  h.r_c = r.f64();
  h.k = r.u64();
  h.n = r.u64();
  h.permutation_seed = r.u64();
  const std::uint32_t stored_meta_crc = r.u32();

  const std::uint64_t meta_bytes = kIndexEntryBytes * h.k + 8ull * h.dimension * h.k;
  if (h.k > src.size() || meta_bytes > src.size() - kHeaderBytes) {
    throw StoreCorrupt("index extends past end of file");
  }
  std::vector<std::byte> meta(meta_bytes);
  src.read_at(kHeaderBytes, meta);
  std::uint32_t crc = crc32(std::span(head).first(56));
  crc = crc32(meta, crc);
  if (crc != stored_meta_crc) throw StoreCorrupt("header/index checksum mismatch");

  Reader m(meta);
  store.blocks_offset_ = kHeaderBytes + meta_bytes;
  store.index_.resize(h.k);
  std::uint64_t members = 0;
  std::uint64_t expected_offset = store.blocks_offset_;
  for (std::uint64_t i = 0; i < h.k; ++i) {
    ClusterIndexEntry& e = store.index_[i];
    e.cluster_id = m.u64();
    e.byte_offset = m.u64();
    e.compressed_length = m.u64();
    e.member_count = m.u64();
    e.center_id = m.u64();
    e.block_crc = m.u32();
    m.u32();
    if (e.cluster_id != i || e.byte_offset != expected_offset || e.member_count == 0 ||
        e.compressed_length > src.size() || e.byte_offset > src.size() - e.compressed_length) {
      throw StoreCorrupt("cluster index entry " + std::to_string(i) + " is inconsistent");
    }
    expected_offset += e.compressed_length;
    members += e.member_count;
  }
  if (members != h.n) throw StoreCorrupt("cluster member counts do not sum to n");

  store.centers_.resize(h.k * h.dimension);
  for (double& v : store.centers_) v = m.f64();
  store.distance_ = DistanceFunction(DistanceDescriptor(h.distance));
  store.center_norms_.resize(h.k);
  for (std::uint64_t c = 0; c < h.k; ++c) {
    store.center_norms_[c] = store.distance_.norm_term(
        std::span<const double>(store.centers_).subspan(c * h.dimension, h.dimension));
  }
  return store;
}

StoredCluster CompressedStore::load_cluster(std::size_t cluster_id) const {
  if (cluster_id >= index_.size()) {
    throw std::out_of_range("cluster id " + std::to_string(cluster_id) + " out of range (k = " +
                            std::to_string(index_.size()) + ")");
  }
  const ClusterIndexEntry& e = index_[cluster_id];
  std::vector<std::byte> packed(e.compressed_length);
  source_->read_at(e.byte_offset, packed);
  if (crc32(packed) != e.block_crc) {
    throw StoreCorrupt("checksum mismatch in cluster block " + std::to_string(cluster_id));
  }
  const std::size_t dim = header_.dimension;
  const std::vector<std::byte> raw = decompress(header_.codec, packed, e.member_count * record_bytes(dim));
  blocks_decompressed_.fetch_add(1);

  StoredCluster out;
  out.cluster_id = cluster_id;
  out.center_id = e.center_id;
  out.dimension = dim;
  out.ids.resize(e.member_count);
  out.coords.resize(e.member_count * dim);
  Reader r(raw);
  for (std::size_t i = 0; i < e.member_count; ++i) {
    out.ids[i] = r.u64();
    for (std::size_t j = 0; j < dim; ++j) out.coords[i * dim + j] = r.f64();
  }
  if (out.ids.front() != e.center_id) {
    throw StoreCorrupt("cluster block " + std::to_string(cluster_id) + " does not start with its center");
  }
  return out;
}

QueryResult search_on_store(const CompressedStore& store, std::span<const double> q, double r,
                            const SearchOptions& options, EvalCounter* counter) {
  detail::check_query(q, store.dimension(), r);
  const DistanceFunction& dist = store.distance_function();
  const std::size_t dim = store.dimension();
  const double q_norm = dist.norm_term(q);
  const double threshold = (r + store.header().r_c) * options.coarse_radius_scale;

  QueryResult result;
  const std::vector<std::size_t> candidates =
      detail::scan_centers(dist, store.center_coords(), store.center_norms(), dim, q, q_norm, threshold);
  result.stats.coarse_evals = store.k();
  charge(counter, EvalPhase::coarse, store.k());

  std::vector<double> norms;
  for (const std::size_t ci : candidates) {
    const StoredCluster c = store.load_cluster(ci);
    norms.resize(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) {
      norms[m] = dist.norm_term(std::span<const double>(c.coords).subspan(m * dim, dim));
    }
    detail::scan_block(dist, c.ids, c.coords, norms, dim, q, q_norm, r, result.hits);
    result.stats.fine_evals += c.size();
  }
  charge(counter, EvalPhase::fine, result.stats.fine_evals);
  result.stats.clusters_scanned = candidates.size();
  result.stats.candidate_fraction =
      store.size() == 0 ? 0.0 : static_cast<double>(result.stats.fine_evals) / static_cast<double>(store.size());
  if (options.sort_hits) sort_hits(result.hits);
  return result;
}

ClusteredDatabase read_database(const CompressedStore& store) {
  std::vector<ClusterParts> parts;
  parts.reserve(store.k());
  for (std::size_t ci = 0; ci < store.k(); ++ci) {
    StoredCluster c = store.load_cluster(ci);
    parts.push_back(ClusterParts{std::move(c.ids), std::move(c.coords)});
  }
  const StoreHeader& h = store.header();
  return ClusteredDatabase::from_parts(h.dimension, DistanceDescriptor(h.distance), h.r_c,
                                       h.permutation_seed, std::move(parts));
}

ClusteredDatabase read_database(const std::filesystem::path& path) {
  return read_database(CompressedStore::open(path));
}

}  // namespace escale::storage

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace escale::storage {

// Positional reads over an immutable byte range. Implementations must be
// safe for concurrent read_at() calls.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::uint64_t size() const = 0;
  // Fills `out` from [offset, offset + out.size()); throws on short reads.
  virtual void read_at(std::uint64_t offset, std::span<std::byte> out) const = 0;
};

class FileByteSource final : public ByteSource {
 public:
  explicit FileByteSource(const std::filesystem::path& path);
  ~FileByteSource() override;
  FileByteSource(const FileByteSource&) = delete;
  FileByteSource& operator=(const FileByteSource&) = delete;

  std::uint64_t size() const override { return size_; }
  void read_at(std::uint64_t offset, std::span<std::byte> out) const override;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

class MemoryByteSource final : public ByteSource {
 public:
  explicit MemoryByteSource(std::vector<std::byte> bytes) : bytes_(std::move(bytes)) {}
  std::uint64_t size() const override { return bytes_.size(); }
  void read_at(std::uint64_t offset, std::span<std::byte> out) const override;

 private:
  std::vector<std::byte> bytes_;
};

struct ByteRange {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  friend bool operator==(const ByteRange&, const ByteRange&) = default;
};

// Records every range read through it.
class TracingByteSource final : public ByteSource {
 public:
  explicit TracingByteSource(std::unique_ptr<ByteSource> inner) : inner_(std::move(inner)) {}

  std::uint64_t size() const override { return inner_->size(); }
  void read_at(std::uint64_t offset, std::span<std::byte> out) const override;

  std::vector<ByteRange> reads() const;
  void clear();

 private:
  std::unique_ptr<ByteSource> inner_;
  mutable std::mutex mutex_;
  mutable std::vector<ByteRange> reads_;
};

}  // namespace escale::storage

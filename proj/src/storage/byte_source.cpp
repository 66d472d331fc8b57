// SPDX-License-Identifier: Apache-2.0
#include "escale/storage/byte_source.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <string>

namespace escale::storage {

FileByteSource::FileByteSource(const std::filesystem::path& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) {
    throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  }
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    const int err = errno;
    ::close(fd_);
    throw std::runtime_error("cannot stat " + path.string() + ": " + std::strerror(err));
  }
  size_ = static_cast<std::uint64_t>(st.st_size);
}

FileByteSource::~FileByteSource() {
  if (fd_ >= 0) ::close(fd_);
}

void FileByteSource::read_at(std::uint64_t offset, std::span<std::byte> out) const {
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t got = ::pread(fd_, out.data() + done, out.size() - done,
                                static_cast<off_t>(offset + done));
    if (got < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("read failed on " + path_.string() + ": " + std::strerror(errno));
    }
    if (got == 0) {
      throw std::runtime_error("unexpected end of file in " + path_.string() + " at offset " +
                               std::to_string(offset + done));
    }
    done += static_cast<std::size_t>(got);
  }
}

void MemoryByteSource::read_at(std::uint64_t offset, std::span<std::byte> out) const {
  if (offset > bytes_.size() || out.size() > bytes_.size() - offset) {
    throw std::runtime_error("read past end of buffer");
  }
  std::memcpy(out.data(), bytes_.data() + offset, out.size());
}

void TracingByteSource::read_at(std::uint64_t offset, std::span<std::byte> out) const {
  {
    std::lock_guard lock(mutex_);
    reads_.push_back(ByteRange{offset, out.size()});
  }
  inner_->read_at(offset, out);
}

std::vector<ByteRange> TracingByteSource::reads() const {
  std::lock_guard lock(mutex_);
  return reads_;
}

void TracingByteSource::clear() {
  std::lock_guard lock(mutex_);
  reads_.clear();
}

}  // namespace escale::storage

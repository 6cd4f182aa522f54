// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

namespace canopy {

// Random-access byte stream. Implementations must be safe for concurrent
// read_at calls on the same instance.
class ByteSource {
public:
    virtual ~ByteSource() = default;

    virtual std::uint64_t size() const = 0;

    // Reads exactly `count` bytes at `offset` into `out`; returns false on
    // short read or I/O error.
    virtual bool read_at(std::uint64_t offset, std::size_t count, void* out) const = 0;
};

// pread-backed source; one fd shared by all readers.
class FileByteSource final : public ByteSource {
public:
    explicit FileByteSource(const std::filesystem::path& path);
    ~FileByteSource() override;

    FileByteSource(const FileByteSource&) = delete;
    FileByteSource& operator=(const FileByteSource&) = delete;

    std::uint64_t size() const override { return size_; }
    bool read_at(std::uint64_t offset, std::size_t count, void* out) const override;

private:
    int fd_ = -1;
    std::uint64_t size_ = 0;
};

class MemoryByteSource final : public ByteSource {
public:
    explicit MemoryByteSource(std::vector<std::uint8_t> bytes)
        : bytes_(std::move(bytes)) {}

    std::uint64_t size() const override { return bytes_.size(); }
    bool read_at(std::uint64_t offset, std::size_t count, void* out) const override;

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

} // namespace canopy

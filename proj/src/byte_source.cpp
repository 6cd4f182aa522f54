// SPDX-License-Identifier: Apache-2.0
#include "canopy/byte_source.hpp"

#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include "canopy/error.hpp"

namespace canopy {

FileByteSource::FileByteSource(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0)
        throw Error(ErrorCode::IoFailure,
                    "cannot open " + path.string() + ": " + std::strerror(errno));
    struct stat st{};
    if (::fstat(fd_, &st) != 0) {
        int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::IoFailure,
                    "cannot stat " + path.string() + ": " + std::strerror(err));
    }
    size_ = static_cast<std::uint64_t>(st.st_size);
}

FileByteSource::~FileByteSource() {
    if (fd_ >= 0)
        ::close(fd_);
}

bool FileByteSource::read_at(std::uint64_t offset, std::size_t count, void* out) const {
    auto* dst = static_cast<std::uint8_t*>(out);
    while (count > 0) {
        ssize_t n = ::pread(fd_, dst, count, static_cast<off_t>(offset));
        if (n <= 0)
            return false;
        dst += n;
        offset += static_cast<std::uint64_t>(n);
        count -= static_cast<std::size_t>(n);
    }
    return true;
}

bool MemoryByteSource::read_at(std::uint64_t offset, std::size_t count, void* out) const {
    if (offset > bytes_.size() || count > bytes_.size() - offset)
        return false;
    std::memcpy(out, bytes_.data() + offset, count);
    return true;
}

} // namespace canopy

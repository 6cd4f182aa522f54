// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <utility>

#include "canopy/byte_source.hpp"

namespace fixtures {

// Forwards to an inner source while counting read calls and bytes, so tests
// can assert how much of a file a decode actually touched.
class CountingSource : public canopy::ByteSource {
public:
    explicit CountingSource(std::shared_ptr<const canopy::ByteSource> inner)
        : inner_(std::move(inner)) {}

    std::uint64_t size() const override { return inner_->size(); }

    bool read_at(std::uint64_t offset, std::size_t count, void* out) const override {
        reads_.fetch_add(1, std::memory_order_relaxed);
        bytes_.fetch_add(count, std::memory_order_relaxed);
        return inner_->read_at(offset, count, out);
    }

    std::uint64_t reads() const { return reads_.load(); }
    std::uint64_t bytes() const { return bytes_.load(); }

    void reset() {
        reads_.store(0);
        bytes_.store(0);
    }

private:
    std::shared_ptr<const canopy::ByteSource> inner_;
    mutable std::atomic<std::uint64_t> reads_{0};
    mutable std::atomic<std::uint64_t> bytes_{0};
};

} // namespace fixtures

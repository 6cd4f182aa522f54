// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "canopy/error.hpp"
#include "canopy/segmentation.hpp"
#include "canopy/store.hpp"
#include "test_util.hpp"

using namespace canopy;
using fixtures::TempDir;

namespace {

PaddedChunk blank_chunk(std::uint32_t cs, std::uint32_t in_w, std::uint32_t in_h,
                        const std::string& file = "f", std::uint32_t row = 0,
                        std::uint32_t col = 0) {
    PaddedChunk chunk;
    chunk.chunk_size = cs;
    chunk.ref.file_name = file;
    chunk.ref.row = row;
    chunk.ref.col = col;
    chunk.ref.in_width = in_w;
    chunk.ref.in_height = in_h;
    chunk.pixels.assign(std::size_t(cs) * cs * 3, 0);
    return chunk;
}

void set_pixel(PaddedChunk& chunk, std::uint32_t x, std::uint32_t y, std::uint8_t r,
               std::uint8_t g, std::uint8_t b) {
    std::uint8_t* p =
        chunk.pixels.data() + (std::size_t(y) * chunk.chunk_size + x) * 3;
    p[0] = r;
    p[1] = g;
    p[2] = b;
}

std::uint64_t popcount(const CanopyMask& mask) {
    std::uint64_t n = 0;
    for (std::uint8_t b : mask.bits)
        n += b;
    return n;
}

} // namespace

TEST_CASE("estimator names round-trip") {
    CHECK(estimator_kind_from_name("threshold") == EstimatorKind::threshold);
    CHECK(estimator_kind_from_name("mask") == EstimatorKind::mask_import);
    CHECK(estimator_kind_from_name("boxes") == EstimatorKind::box_import);
    CHECK(estimator_kind_name(EstimatorKind::threshold) == std::string("threshold"));
    CHECK(estimator_kind_name(EstimatorKind::mask_import) == std::string("mask"));
    CHECK(estimator_kind_name(EstimatorKind::box_import) == std::string("boxes"));
    try {
        estimator_kind_from_name("otsu");
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("excess green threshold marks exactly the expected pixels") {
    PaddedChunk chunk = blank_chunk(8, 8, 8);
    set_pixel(chunk, 0, 0, 10, 200, 10);  // 2G-R-B = 380 > 40: marked
    set_pixel(chunk, 1, 0, 100, 120, 90); // 50 > 40: marked
    set_pixel(chunk, 2, 0, 100, 120, 100); // 40, not > 40: unmarked
    set_pixel(chunk, 3, 0, 200, 50, 30);  // -130: unmarked
    set_pixel(chunk, 4, 0, 0, 0, 0);      // not covered: unmarked regardless of tau

    CanopyMask mask = segment_threshold(chunk);
    CHECK(mask.at(0, 0));
    CHECK(mask.at(1, 0));
    CHECK_FALSE(mask.at(2, 0));
    CHECK_FALSE(mask.at(3, 0));
    CHECK_FALSE(mask.at(4, 0));
    CHECK(popcount(mask) == 2);
    CHECK(mask.ref == chunk.ref);

    // tau = -510 marks every covered pixel, including pure red
    CanopyMask all = segment_threshold(chunk, -510);
    CHECK(all.at(3, 0));
    CHECK_FALSE(all.at(4, 0)); // uncovered stays unmarked
    CHECK(popcount(all) == 4);

    // tau = 510 can never be exceeded
    CHECK(popcount(segment_threshold(chunk, 510)) == 0);
}

TEST_CASE("threshold marks are monotone in tau") {
    std::mt19937 rng(9);
    PaddedChunk chunk = blank_chunk(16, 13, 11);
    for (std::uint32_t y = 0; y < 11; ++y)
        for (std::uint32_t x = 0; x < 13; ++x)
            set_pixel(chunk, x, y, std::uint8_t(rng() % 256), std::uint8_t(rng() % 256),
                      std::uint8_t(rng() % 256));

    std::uint64_t previous = popcount(segment_threshold(chunk, -510));
    for (int tau = -400; tau <= 510; tau += 70) {
        std::uint64_t marks = popcount(segment_threshold(chunk, tau));
        CHECK(marks <= previous);
        previous = marks;
    }

    try {
        segment_threshold(chunk, 511);
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
    CHECK_THROWS_AS(segment_threshold(chunk, -511), Error);
}

TEST_CASE("threshold never marks padding") {
    PaddedChunk chunk = blank_chunk(8, 3, 3);
    // poke green into the padding region; the estimator must ignore it
    set_pixel(chunk, 7, 7, 0, 255, 0);
    set_pixel(chunk, 1, 1, 0, 255, 0);
    CanopyMask mask = segment_threshold(chunk);
    CHECK(mask.at(1, 1));
    CHECK_FALSE(mask.at(7, 7));
    CHECK(popcount(mask) == 1);
}

TEST_CASE("detection parsing accepts the documented grammar") {
    auto boxes = parse_detections("0 0.5 0.5 0.25 0.25\n"
                                  "\n"
                                  "  \t \n"
                                  "3 0.1 0.2 0.3 0.4 0.87\n");
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0].class_id == 0);
    CHECK(boxes[0].cx == 0.5);
    CHECK(boxes[0].w == 0.25);
    CHECK_FALSE(boxes[0].confidence.has_value());
    CHECK(boxes[1].class_id == 3);
    REQUIRE(boxes[1].confidence.has_value());
    CHECK(*boxes[1].confidence == 0.87);

    CHECK(parse_detections("").empty());
    CHECK(parse_detections("\n\n").empty());
}

TEST_CASE("detection coordinates clamp to their unit ranges") {
    auto boxes = parse_detections("0 -0.25 1.5 0.5 2.0 1.25\n");
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].cx == 0.0);
    CHECK(boxes[0].cy == 1.0);
    CHECK(boxes[0].w == 0.5);
    CHECK(boxes[0].h == 1.0);
    CHECK(*boxes[0].confidence == 1.0);

    auto low = parse_detections("2 0.5 0.5 0.5 0.5 -3.0\n");
    CHECK(*low[0].confidence == 0.0);
}

TEST_CASE("malformed detection lines are errors that carry the line number") {
    auto expect_line = [](const std::string& text, const char* needle) {
        try {
            parse_detections(text);
            FAIL("expected MalformedLine");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MalformedLine);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_line("0 0.5 0.5 0.25\n", "line 1");                       // arity 4
    expect_line("0 0.5 0.5 0.25 0.25 0.9 7\n", "line 1");            // arity 7
    expect_line("0 0.5 0.5 0.25 0.25\nx y\n", "line 2");             // non-numeric
    expect_line("0 0.5 0.5 0 0.25\n", "line 1");                     // zero width
    expect_line("0 0.5 0.5 0.25 -0.1\n", "line 1");                  // negative height
    expect_line("0 0.5 0.5 0.25 0.25 0.9 \n1 1 1 1\n", "line 2");    // short line 2
}

TEST_CASE("box rasterization hits the documented pixel counts") {
    ChunkRef ref;
    ref.in_width = 640;
    ref.in_height = 640;

    auto boxes = parse_detections("0 0.5 0.5 0.5 0.5\n");
    CanopyMask mask = rasterize_boxes(boxes, ref, 640);
    CHECK(popcount(mask) == 102400); // [160,480) squared
    CHECK(mask.at(160, 160));
    CHECK(mask.at(479, 479));
    CHECK_FALSE(mask.at(159, 160));
    CHECK_FALSE(mask.at(480, 479));

    // duplicated box marks the same union
    auto twice = parse_detections("0 0.5 0.5 0.5 0.5\n0 0.5 0.5 0.5 0.5\n");
    CHECK(popcount(rasterize_boxes(twice, ref, 640)) == 102400);

    // the full-frame box marks everything
    auto full = parse_detections("1 0.5 0.5 1 1\n");
    CHECK(popcount(rasterize_boxes(full, ref, 640)) == std::uint64_t(640) * 640);

    // no boxes, no marks
    CHECK(popcount(rasterize_boxes({}, ref, 640)) == 0);
}

TEST_CASE("box union matches a brute-force oracle") {
    ChunkRef ref;
    ref.in_width = 64;
    ref.in_height = 64;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 10; ++trial) {
        std::vector<DetectionBox> boxes;
        for (int i = 0; i < 3; ++i) {
            DetectionBox box;
            box.cx = unit(rng);
            box.cy = unit(rng);
            box.w = 0.05 + unit(rng) * 0.9;
            box.h = 0.05 + unit(rng) * 0.9;
            boxes.push_back(box);
        }
        CanopyMask mask = rasterize_boxes(boxes, ref, 64);

        auto edge = [](double t) {
            long long v = std::llround(64.0 * t);
            return std::uint32_t(std::clamp(v, 0LL, 64LL));
        };
        std::vector<std::uint8_t> oracle(64 * 64, 0);
        for (const DetectionBox& box : boxes) {
            std::uint32_t x0 = edge(box.cx - box.w / 2);
            std::uint32_t x1 = edge(box.cx + box.w / 2);
            std::uint32_t y0 = edge(box.cy - box.h / 2);
            std::uint32_t y1 = edge(box.cy + box.h / 2);
            for (std::uint32_t y = y0; y < y1; ++y)
                for (std::uint32_t x = x0; x < x1; ++x)
                    oracle[y * 64 + x] = 1;
        }
        CHECK(mask.bits == oracle);
    }
}

TEST_CASE("mask import round-trips through the store") {
    TempDir dir;
    Store store(dir / "store");

    CanopyMask mask;
    mask.ref.file_name = "img";
    mask.ref.row = 1;
    mask.ref.col = 2;
    mask.ref.in_width = 30;
    mask.ref.in_height = 20;
    mask.chunk_size = 32;
    mask.bits.assign(std::size_t(32) * 32, 0);
    std::mt19937 rng(5);
    for (auto& b : mask.bits)
        b = rng() % 3 == 0 ? 1 : 0;
    store.write_mask(mask);

    ChunkRef ref = mask.ref;
    CanopyMask loaded = import_mask(store, ref, 32);
    CHECK(loaded.bits == mask.bits);
    CHECK(loaded.ref == ref);
}

TEST_CASE("a missing stored mask is MaskMissing") {
    TempDir dir;
    Store store(dir / "store");
    ChunkRef ref;
    ref.file_name = "img";
    ref.row = 0;
    ref.col = 0;
    ref.in_width = 10;
    ref.in_height = 10;
    try {
        import_mask(store, ref, 640);
        FAIL("expected MaskMissing");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MaskMissing);
    }
}

TEST_CASE("a stored mask with the wrong shape is MaskShapeMismatch") {
    TempDir dir;
    Store store(dir / "store");

    CanopyMask small;
    small.ref.file_name = "img";
    small.ref.in_width = 320;
    small.ref.in_height = 320;
    small.chunk_size = 320;
    small.bits.assign(std::size_t(320) * 320, 1);
    store.write_mask(small);

    ChunkRef ref = small.ref;
    try {
        import_mask(store, ref, 640);
        FAIL("expected MaskShapeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MaskShapeMismatch);
    }
}

TEST_CASE("an RGB file where a mask should be is MaskShapeMismatch") {
    TempDir dir;
    Store store(dir / "store");

    // write a chunk PNG (RGB) then copy it over the mask path
    PaddedChunk chunk = blank_chunk(16, 16, 16, "img", 0, 0);
    set_pixel(chunk, 0, 0, 1, 2, 3);
    store.write_chunk(chunk);
    std::filesystem::create_directories(
        store.mask_path("img", 0, 0).parent_path());
    std::filesystem::copy_file(store.chunk_path("img", 0, 0),
                               store.mask_path("img", 0, 0));

    ChunkRef ref = chunk.ref;
    try {
        import_mask(store, ref, 16);
        FAIL("expected MaskShapeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MaskShapeMismatch);
    }
}

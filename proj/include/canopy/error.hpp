// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace canopy {

enum class ErrorCode {
    // container / page parsing
    BadMagic,
    TruncatedHeader,
    CyclicDirectoryChain,
    CorruptDirectory,
    BandOutOfRange,
    UnsupportedCompression,
    UnsupportedPlanarConfig,
    UnsupportedSampleFormat,
    WindowOutOfBounds,
    CorruptSegment,
    SegmentOutOfFile,
    // tiling
    ZeroDimension,
    // segmentation inputs
    MaskMissing,
    MaskShapeMismatch,
    MalformedLine,
    // metrics
    RefMismatch,
    EmptyInput,
    MissingScale,
    // store
    IoFailure,
    CorruptManifest,
    // cli / pipeline
    InvalidConfig,
    MissingRun,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Process exit classes: 0 success, 2 config, 3 parse, 4 store, 1 anything else.
int exit_class(ErrorCode code);

} // namespace canopy

// SPDX-License-Identifier: Apache-2.0
#include "canopy/error.hpp"

namespace canopy {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadMagic:                return "BadMagic";
        case ErrorCode::TruncatedHeader:         return "TruncatedHeader";
        case ErrorCode::CyclicDirectoryChain:    return "CyclicDirectoryChain";
        case ErrorCode::CorruptDirectory:        return "CorruptDirectory";
        case ErrorCode::BandOutOfRange:          return "BandOutOfRange";
        case ErrorCode::UnsupportedCompression:  return "UnsupportedCompression";
        case ErrorCode::UnsupportedPlanarConfig: return "UnsupportedPlanarConfig";
        case ErrorCode::UnsupportedSampleFormat: return "UnsupportedSampleFormat";
        case ErrorCode::WindowOutOfBounds:       return "WindowOutOfBounds";
        case ErrorCode::CorruptSegment:          return "CorruptSegment";
        case ErrorCode::SegmentOutOfFile:        return "SegmentOutOfFile";
        case ErrorCode::ZeroDimension:           return "ZeroDimension";
        case ErrorCode::MaskMissing:             return "MaskMissing";
        case ErrorCode::MaskShapeMismatch:       return "MaskShapeMismatch";
        case ErrorCode::MalformedLine:           return "MalformedLine";
        case ErrorCode::RefMismatch:             return "RefMismatch";
        case ErrorCode::EmptyInput:              return "EmptyInput";
        case ErrorCode::MissingScale:            return "MissingScale";
        case ErrorCode::IoFailure:               return "IoFailure";
        case ErrorCode::CorruptManifest:         return "CorruptManifest";
        case ErrorCode::InvalidConfig:           return "InvalidConfig";
        case ErrorCode::MissingRun:              return "MissingRun";
    }
    return "UnknownError";
}

int exit_class(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::MissingRun:
        case ErrorCode::EmptyInput:
            return 2;
        case ErrorCode::BadMagic:
        case ErrorCode::TruncatedHeader:
        case ErrorCode::CyclicDirectoryChain:
        case ErrorCode::CorruptDirectory:
        case ErrorCode::BandOutOfRange:
        case ErrorCode::UnsupportedCompression:
        case ErrorCode::UnsupportedPlanarConfig:
        case ErrorCode::UnsupportedSampleFormat:
        case ErrorCode::WindowOutOfBounds:
        case ErrorCode::CorruptSegment:
        case ErrorCode::SegmentOutOfFile:
        case ErrorCode::ZeroDimension:
        case ErrorCode::MalformedLine:
        case ErrorCode::MaskShapeMismatch:
        case ErrorCode::RefMismatch:
        case ErrorCode::MissingScale:
            return 3;
        case ErrorCode::MaskMissing:
        case ErrorCode::IoFailure:
        case ErrorCode::CorruptManifest:
            return 4;
    }
    return 1;
}

} // namespace canopy

#include "cbir/error.hpp"

namespace cbir {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptStream: return "CorruptStream";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::TooFewCategories: return "TooFewCategories";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoModels: return "NoModels";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EvenPatch: return "EvenPatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyCategory: return "EmptyCategory";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::EmptyScope: return "EmptyScope";
    case ErrorCode::AllQueriesFailed: return "AllQueriesFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& context)
    : std::runtime_error(std::string(error_name(code)) + ": " + context),
      code_(code),
      context_(context) {}

}  // namespace cbir

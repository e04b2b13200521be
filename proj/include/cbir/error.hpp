#ifndef CBIR_ERROR_HPP
#define CBIR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbir {

enum class ErrorCode {
    // imaging
    UnsupportedFormat,
    CorruptStream,
    ZeroDimension,
    // edges / classifier
    ImageTooSmall,
    TooFewCategories,
    EmptyInput,
    NoModels,
    // histogram
    LengthMismatch,
    // spectral
    NotSymmetric,
    NoConvergence,
    ShapeMismatch,
    // matchpoint
    EvenPatch,
    DimensionMismatch,
    // index store
    EmptyCategory,
    BadMagic,
    UnsupportedVersion,
    TruncatedFile,
    TrailingBytes,
    ChecksumMismatch,
    // engine / bench
    UnknownCategory,
    EmptyScope,
    AllQueriesFailed,
    // generic
    InvalidArgument,
    IoError,
};

[[nodiscard]] std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library. what() is "<Name>: <context>".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& context);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::string_view name() const noexcept { return error_name(code_); }
    [[nodiscard]] const std::string& context() const noexcept { return context_; }

private:
    ErrorCode code_;
    std::string context_;
};

}  // namespace cbir

#endif  // CBIR_ERROR_HPP

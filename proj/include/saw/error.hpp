#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saw {

enum class ErrorCode {
    MalformedHeader,
    MaxvalUnsupported,
    TruncatedData,
    UnsupportedFormat,
    InvalidDimensions,
    DimensionMismatch,
    QualityOutOfRange,
    BadMarker,
    UnsupportedMode,
    TruncatedStream,
    CorruptStream,
    NoContent,
    RectOutOfBounds,
    KeyNotCoprime,
    CapacityExceeded,
    BlockNotDark,
    InvalidParams,
    ManifestInvalid,
    IoError,
};

// Stable, machine-readable names. The CLI prints these on failure.
constexpr std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedHeader:   return "malformed-header";
    case ErrorCode::MaxvalUnsupported: return "maxval-unsupported";
    case ErrorCode::TruncatedData:     return "truncated-data";
    case ErrorCode::UnsupportedFormat: return "unsupported-format";
    case ErrorCode::InvalidDimensions: return "invalid-dimensions";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::QualityOutOfRange: return "quality-out-of-range";
    case ErrorCode::BadMarker:         return "bad-marker";
    case ErrorCode::UnsupportedMode:   return "unsupported-mode";
    case ErrorCode::TruncatedStream:   return "truncated-stream";
    case ErrorCode::CorruptStream:     return "corrupt-stream";
    case ErrorCode::NoContent:         return "no-content";
    case ErrorCode::RectOutOfBounds:   return "rect-out-of-bounds";
    case ErrorCode::KeyNotCoprime:     return "key-not-coprime";
    case ErrorCode::CapacityExceeded:  return "capacity-exceeded";
    case ErrorCode::BlockNotDark:      return "block-not-dark";
    case ErrorCode::InvalidParams:     return "invalid-params";
    case ErrorCode::ManifestInvalid:   return "manifest-invalid";
    case ErrorCode::IoError:           return "io-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace saw

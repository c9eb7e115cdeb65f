#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsadapt {

/// Category of a failure. Every validation path in the library raises an
/// `Error` carrying exactly one of these, so callers (and tests) can branch on
/// the kind instead of parsing messages.
enum class ErrorCode {
    Parse,               // malformed document syntax
    Usage,               // bad command-line invocation
    Io,                  // file cannot be opened, read or written
    EmptyBands,          // sensor spec without bands
    DuplicateName,       // band name or sample_id repeated
    InvalidValue,        // non-positive / out-of-domain scalar
    Units,               // wavelengths look like micrometres
    MissingColumn,       // SRF or targets CSV lacks a required column
    NegativeSensitivity, // SRF value < 0
    NonMonotone,         // wavelength list not strictly increasing
    NonNumeric,          // CSV cell is not a number
    NonFinite,           // NaN / Inf where finite data is required
    RaggedRow,           // CSV row with the wrong number of cells
    EmptyTable,          // CSV without data rows
    IndexOutOfRange,     // band index or class label out of range
    GridMismatch,        // plan / weights built for a different grid
    BandCountMismatch,   // cube band count differs from weights rows
    ShapeMismatch,       // arrays of incompatible shapes
    EmptySupport,        // SRF band sees no HSI band
    NoUnion,             // every class has zero union
    DegenerateBaseline,  // zero-variance training target
    BadMagic,            // container magic bytes wrong
    UnsupportedVersion,  // container header declares unknown dtype/layout
    LengthMismatch,      // header and payload sizes disagree
    UnpairedFiles,       // prediction / truth directories differ
    Precondition,        // other violated precondition
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace hsadapt

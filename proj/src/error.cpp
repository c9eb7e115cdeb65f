#include "hsadapt/error.hpp"

namespace hsadapt {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Io: return "io";
    case ErrorCode::EmptyBands: return "empty-bands";
    case ErrorCode::DuplicateName: return "duplicate-name";
    case ErrorCode::InvalidValue: return "invalid-value";
    case ErrorCode::Units: return "units";
    case ErrorCode::MissingColumn: return "missing-column";
    case ErrorCode::NegativeSensitivity: return "negative-sensitivity";
    case ErrorCode::NonMonotone: return "non-monotone";
    case ErrorCode::NonNumeric: return "non-numeric";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::RaggedRow: return "ragged-row";
    case ErrorCode::EmptyTable: return "empty-table";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::BandCountMismatch: return "band-count-mismatch";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::EmptySupport: return "empty-support";
    case ErrorCode::NoUnion: return "no-union";
    case ErrorCode::DegenerateBaseline: return "degenerate-baseline";
    case ErrorCode::BadMagic: return "bad-magic";
    case ErrorCode::UnsupportedVersion: return "unsupported-version";
    case ErrorCode::LengthMismatch: return "length-mismatch";
    case ErrorCode::UnpairedFiles: return "unpaired-files";
    case ErrorCode::Precondition: return "precondition";
    }
    return "unknown";
}

} // namespace hsadapt

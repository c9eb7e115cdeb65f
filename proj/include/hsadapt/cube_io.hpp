#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hsadapt/hypercube.hpp"

namespace hsadapt {

// HSC-v1 cube container:
//   "HSC1" | u64 LE header length | UTF-8 JSON header | payload
// header = {"c","dtype":"f32le","h","layout":"bip","w","wavelengths_nm"}
// payload = H*W*C little-endian float32, pixel-interleaved.
//
// HSM-v1 mask container: "HSM1" | u64 LE length | JSON
// {"dtype":"i16le","h","ignore_value","w"} | H*W little-endian int16.

struct CubeReadOptions {
    bool allow_non_finite = false;
    /// Accept band wavelengths that are not strictly increasing (adapted
    /// outputs keep the target sensor's band order).
    bool allow_unordered_bands = false;
};

HyperCube read_cube(std::istream& in, const CubeReadOptions& options = {});
void write_cube(std::ostream& out, const HyperCube& cube);

HyperCube decode_cube(std::string_view bytes, const CubeReadOptions& options = {});
std::string encode_cube(const HyperCube& cube);

HyperCube read_cube_file(const std::string& path, const CubeReadOptions& options = {});
void write_cube_file(const std::string& path, const HyperCube& cube);

LabelMask read_mask(std::istream& in);
void write_mask(std::ostream& out, const LabelMask& mask);

LabelMask decode_mask(std::string_view bytes);
std::string encode_mask(const LabelMask& mask);

LabelMask read_mask_file(const std::string& path);
void write_mask_file(const std::string& path, const LabelMask& mask);

/// Size in bytes of an HSC-v1 payload.
constexpr std::size_t cube_payload_bytes(std::size_t h, std::size_t w, std::size_t c) noexcept {
    return h * w * c * sizeof(float);
}

/// Row-ordered table of named numeric targets keyed by sample_id.
struct TargetTable {
    std::vector<std::string> sample_ids;
    std::vector<std::string> parameter_names;
    std::vector<double> values; // row-major, rows() x cols()

    std::size_t rows() const noexcept { return sample_ids.size(); }
    std::size_t cols() const noexcept { return parameter_names.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
};

/// Parses `sample_id,<param1>,...,<paramP>` CSV; every cell finite.
TargetTable read_targets_csv(std::string_view text);
std::string write_targets_csv(const TargetTable& table);

} // namespace hsadapt

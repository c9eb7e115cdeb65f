#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace hsadapt {

// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_hex(std::string_view text);

// Digest of a wavelength list: SHA-256 over the little-endian IEEE-754
// encoding of each value. Two grids hash equal iff their values are
// bit-identical.
std::string grid_hash(std::span<const double> wavelengths);

std::string sha256_file(const std::string& path);

} // namespace hsadapt

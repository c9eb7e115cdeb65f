#include "hsadapt/cube_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hsadapt/error.hpp"
#include "text.hpp"

namespace hsadapt {
namespace {

constexpr std::uint64_t kMaxHeaderBytes = 64ull << 20;
constexpr std::uint64_t kMaxPayloadBytes = 1ull << 40;

template <typename T>
T from_le(const unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) u |= static_cast<U>(p[i]) << (8 * i);
    return std::bit_cast<T>(u);
}

template <typename T>
void to_le(T value, unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
    const U u = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) p[i] = static_cast<unsigned char>(u >> (8 * i));
}

std::size_t read_some(std::istream& in, void* dst, std::size_t n) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount());
}

void expect_magic(std::istream& in, std::string_view magic, std::string_view what) {
    std::array<char, 4> m{};
    const auto got = read_some(in, m.data(), m.size());
    const std::string_view seen(m.data(), got);
    if (got == 4 && seen == magic) return;
    if (got == 4 && seen.substr(0, 3) == magic.substr(0, 3))
        fail(ErrorCode::UnsupportedVersion, std::string(what) + ": unsupported container version '" +
                                                std::string(seen) + "'");
    fail(ErrorCode::BadMagic, std::string(what) + ": bad magic, expected '" +
                                  std::string(magic) + "'");
}

nlohmann::json read_header(std::istream& in, std::string_view what) {
    std::array<unsigned char, 8> len_bytes{};
    if (read_some(in, len_bytes.data(), 8) != 8)
        fail(ErrorCode::LengthMismatch, std::string(what) + ": truncated header length");
    const auto len = from_le<std::uint64_t>(len_bytes.data());
    if (len == 0 || len > kMaxHeaderBytes)
        fail(ErrorCode::LengthMismatch,
             std::string(what) + ": implausible header length " + std::to_string(len));
    std::string text(len, '\0');
    const auto got = read_some(in, text.data(), len);
    if (got != len)
        fail(ErrorCode::LengthMismatch, std::string(what) + ": header truncated, expected " +
                                            std::to_string(len) + " bytes, got " +
                                            std::to_string(got));
    try {
        auto header = nlohmann::json::parse(text);
        if (!header.is_object()) fail(ErrorCode::Parse, std::string(what) + ": header is not an object");
        return header;
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::Parse, std::string(what) + ": header JSON: " + e.what());
    }
}

template <typename T>
T header_field(const nlohmann::json& h, const char* key, std::string_view what) {
    if (!h.contains(key)) fail(ErrorCode::Parse, std::string(what) + ": header lacks '" + key + "'");
    try {
        return h.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorCode::Parse, std::string(what) + ": header field '" + key + "' has wrong type");
    }
}

std::uint64_t header_dim(const nlohmann::json& h, const char* key, std::string_view what) {
    if (!h.contains(key) || !h.at(key).is_number_unsigned() || h.at(key).get<std::uint64_t>() == 0)
        fail(ErrorCode::Parse,
             std::string(what) + ": header field '" + key + "' must be a positive integer");
    return h.at(key).get<std::uint64_t>();
}

// Reads exactly `n` payload bytes and checks that the stream ends there.
void read_payload(std::istream& in, unsigned char* dst, std::size_t n, std::string_view what) {
    const auto got = read_some(in, dst, n);
    if (got != n)
        fail(ErrorCode::LengthMismatch, std::string(what) + ": payload length mismatch, expected " +
                                            std::to_string(n) + " bytes, got " +
                                            std::to_string(got));
    if (in.peek() != std::char_traits<char>::eof())
        fail(ErrorCode::LengthMismatch, std::string(what) + ": payload length mismatch, expected " +
                                            std::to_string(n) +
                                            " bytes, found trailing data after payload");
}

void write_container(std::ostream& out, std::string_view magic, const nlohmann::json& header,
                     const std::vector<unsigned char>& payload) {
    const std::string text = header.dump();
    std::array<unsigned char, 8> len{};
    to_le<std::uint64_t>(text.size(), len.data());
    out.write(magic.data(), 4);
    out.write(reinterpret_cast<const char*>(len.data()), 8);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) fail(ErrorCode::Io, "write failed");
}

} // namespace

HyperCube read_cube(std::istream& in, const CubeReadOptions& options) {
    constexpr std::string_view what = "HSC-v1";
    expect_magic(in, "HSC1", what);
    const auto header = read_header(in, what);
    if (header_field<std::string>(header, "dtype", what) != "f32le")
        fail(ErrorCode::UnsupportedVersion, "HSC-v1: unsupported dtype (only 'f32le')");
    if (header_field<std::string>(header, "layout", what) != "bip")
        fail(ErrorCode::UnsupportedVersion, "HSC-v1: unsupported layout (only 'bip')");
    const auto h = header_dim(header, "h", what);
    const auto w = header_dim(header, "w", what);
    const auto c = header_dim(header, "c", what);
    auto wavelengths = header_field<std::vector<double>>(header, "wavelengths_nm", what);
    if (wavelengths.size() != c)
        fail(ErrorCode::LengthMismatch, "HSC-v1: header declares c = " + std::to_string(c) +
                                            " but lists " + std::to_string(wavelengths.size()) +
                                            " wavelengths");
    for (std::size_t i = 0; i < wavelengths.size(); ++i) {
        if (!std::isfinite(wavelengths[i]) || wavelengths[i] <= 0.0)
            fail(ErrorCode::InvalidValue, "HSC-v1: wavelength #" + std::to_string(i) +
                                              " must be finite and > 0");
        if (!options.allow_unordered_bands && i > 0 && !(wavelengths[i] > wavelengths[i - 1]))
            fail(ErrorCode::NonMonotone, "HSC-v1: wavelengths not strictly increasing at #" +
                                             std::to_string(i));
    }
    if (h > kMaxPayloadBytes / w / c / sizeof(float))
        fail(ErrorCode::LengthMismatch, "HSC-v1: declared dimensions are implausibly large");

    const std::size_t count = h * w * c;
    std::vector<unsigned char> raw(count * sizeof(float));
    read_payload(in, raw.data(), raw.size(), what);
    std::vector<float> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        data[i] = from_le<float>(raw.data() + 4 * i);
        if (!options.allow_non_finite && !std::isfinite(data[i]))
            fail(ErrorCode::NonFinite, "HSC-v1: non-finite value at element " + std::to_string(i) +
                                           " (pixel " + std::to_string(i / c) + ", band " +
                                           std::to_string(i % c) + ")");
    }
    return HyperCube(h, w, std::move(wavelengths), std::move(data));
}

void write_cube(std::ostream& out, const HyperCube& cube) {
    nlohmann::json header;
    header["h"] = cube.height();
    header["w"] = cube.width();
    header["c"] = cube.bands();
    header["wavelengths_nm"] =
        std::vector<double>(cube.wavelengths().begin(), cube.wavelengths().end());
    header["dtype"] = "f32le";
    header["layout"] = "bip";
    std::vector<unsigned char> payload(cube.data().size() * sizeof(float));
    for (std::size_t i = 0; i < cube.data().size(); ++i) to_le(cube.data()[i], payload.data() + 4 * i);
    write_container(out, "HSC1", header, payload);
}

HyperCube decode_cube(std::string_view bytes, const CubeReadOptions& options) {
    std::istringstream in{std::string(bytes)};
    return read_cube(in, options);
}

std::string encode_cube(const HyperCube& cube) {
    std::ostringstream out;
    write_cube(out, cube);
    return std::move(out).str();
}

HyperCube read_cube_file(const std::string& path, const CubeReadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open cube '" + path + "'");
    try {
        return read_cube(in, options);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

void write_cube_file(const std::string& path, const HyperCube& cube) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    write_cube(out, cube);
}

LabelMask read_mask(std::istream& in) {
    constexpr std::string_view what = "HSM-v1";
    expect_magic(in, "HSM1", what);
    const auto header = read_header(in, what);
    if (header_field<std::string>(header, "dtype", what) != "i16le")
        fail(ErrorCode::UnsupportedVersion, "HSM-v1: unsupported dtype (only 'i16le')");
    const auto h = header_dim(header, "h", what);
    const auto w = header_dim(header, "w", what);
    const auto ignore = header_field<std::int64_t>(header, "ignore_value", what);
    if (ignore < std::numeric_limits<std::int16_t>::min() ||
        ignore > std::numeric_limits<std::int16_t>::max())
        fail(ErrorCode::InvalidValue, "HSM-v1: ignore_value does not fit in int16");
    if (h > kMaxPayloadBytes / w / sizeof(std::int16_t))
        fail(ErrorCode::LengthMismatch, "HSM-v1: declared dimensions are implausibly large");

    std::vector<unsigned char> raw(h * w * sizeof(std::int16_t));
    read_payload(in, raw.data(), raw.size(), what);
    std::vector<std::int16_t> labels(h * w);
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = from_le<std::int16_t>(raw.data() + 2 * i);
    return LabelMask(h, w, std::move(labels), static_cast<std::int16_t>(ignore));
}

void write_mask(std::ostream& out, const LabelMask& mask) {
    nlohmann::json header;
    header["h"] = mask.height();
    header["w"] = mask.width();
    header["dtype"] = "i16le";
    header["ignore_value"] = mask.ignore_value();
    std::vector<unsigned char> payload(mask.labels().size() * sizeof(std::int16_t));
    for (std::size_t i = 0; i < mask.labels().size(); ++i)
        to_le(mask.labels()[i], payload.data() + 2 * i);
    write_container(out, "HSM1", header, payload);
}

LabelMask decode_mask(std::string_view bytes) {
    std::istringstream in{std::string(bytes)};
    return read_mask(in);
}

std::string encode_mask(const LabelMask& mask) {
    std::ostringstream out;
    write_mask(out, mask);
    return std::move(out).str();
}

LabelMask read_mask_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open mask '" + path + "'");
    try {
        return read_mask(in);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

void write_mask_file(const std::string& path, const LabelMask& mask) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    write_mask(out, mask);
}

TargetTable read_targets_csv(std::string_view text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty()) fail(ErrorCode::EmptyTable, "targets CSV: empty document");
    const auto header = detail::split_cells(lines.front().text);
    if (header.front() != "sample_id")
        fail(ErrorCode::Parse, "targets CSV: first column header must be 'sample_id'");
    if (header.size() < 2) fail(ErrorCode::MissingColumn, "targets CSV: no parameter columns");

    TargetTable table;
    std::set<std::string_view> names;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty() || !names.insert(header[c]).second)
            fail(ErrorCode::DuplicateName,
                 "targets CSV: empty or duplicate column '" + std::string(header[c]) + "'");
        table.parameter_names.emplace_back(header[c]);
    }
    if (lines.size() < 2) fail(ErrorCode::EmptyTable, "targets CSV: no data rows");

    std::set<std::string_view> ids;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = detail::split_cells(lines[r].text);
        const std::string where = "targets CSV line " + std::to_string(lines[r].number);
        if (cells.size() != header.size())
            fail(ErrorCode::RaggedRow, where + ": expected " + std::to_string(header.size()) +
                                           " cells, got " + std::to_string(cells.size()));
        if (!ids.insert(cells[0]).second)
            fail(ErrorCode::DuplicateName,
                 where + ": duplicate sample_id '" + std::string(cells[0]) + "'");
        table.sample_ids.emplace_back(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const double v = detail::parse_number(cells[c], where);
            if (!std::isfinite(v))
                fail(ErrorCode::NonFinite, where + ": non-finite value '" +
                                               std::string(cells[c]) + "' in column '" +
                                               table.parameter_names[c - 1] + "'");
            table.values.push_back(v);
        }
    }
    return table;
}

std::string write_targets_csv(const TargetTable& table) {
    std::string out = "sample_id";
    for (const auto& n : table.parameter_names) out += "," + n;
    out += "\n";
    for (std::size_t r = 0; r < table.rows(); ++r) {
        out += table.sample_ids[r];
        for (std::size_t c = 0; c < table.cols(); ++c) out += "," + detail::format_number(table.at(r, c));
        out += "\n";
    }
    return out;
}

} // namespace hsadapt

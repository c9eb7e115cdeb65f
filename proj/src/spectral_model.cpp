#include "hsadapt/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "hsadapt/digest.hpp"
#include "hsadapt/error.hpp"
#include "text.hpp"

namespace hsadapt {
namespace {

void check_increasing(std::span<const double> v, std::string_view what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] <= 0.0)
            fail(ErrorCode::InvalidValue, std::string(what) + ": wavelength #" +
                                              std::to_string(i) + " (" +
                                              detail::format_number(v[i]) +
                                              ") must be finite and > 0");
        if (i > 0 && !(v[i] > v[i - 1]))
            fail(ErrorCode::NonMonotone,
                 std::string(what) + ": wavelengths must be strictly increasing (" +
                     detail::format_number(v[i - 1]) + " then " +
                     detail::format_number(v[i]) + ")");
    }
}

void check_units(double max_nm, std::string_view what) {
    if (max_nm < kMinPlausibleMaxWavelengthNm)
        fail(ErrorCode::Units, std::string(what) + ": largest wavelength " +
                                   detail::format_number(max_nm) +
                                   " < 100; values must be in nanometres, not micrometres");
}

} // namespace

WavelengthGrid::WavelengthGrid(std::vector<double> values_nm) : values_(std::move(values_nm)) {
    if (values_.empty()) fail(ErrorCode::InvalidValue, "wavelength grid is empty");
    check_increasing(values_, "wavelength grid");
}

std::string WavelengthGrid::hash() const { return grid_hash(values_); }

SensorSpec::SensorSpec(std::string sensor_name, std::vector<TargetBand> bands)
    : name_(std::move(sensor_name)), bands_(std::move(bands)) {
    if (bands_.empty()) fail(ErrorCode::EmptyBands, "sensor '" + name_ + "' has no bands");
    std::set<std::string_view> seen;
    for (const auto& b : bands_) {
        if (b.name.empty()) fail(ErrorCode::InvalidValue, "sensor band with empty name");
        if (!seen.insert(b.name).second)
            fail(ErrorCode::DuplicateName, "duplicate band name '" + b.name + "'");
        if (!std::isfinite(b.center_nm) || b.center_nm <= 0.0)
            fail(ErrorCode::InvalidValue, "band '" + b.name + "' has non-positive centre " +
                                              detail::format_number(b.center_nm));
    }
}

std::vector<double> SensorSpec::centers() const {
    std::vector<double> out;
    out.reserve(bands_.size());
    for (const auto& b : bands_) out.push_back(b.center_nm);
    return out;
}

std::vector<std::string> SensorSpec::names() const {
    std::vector<std::string> out;
    out.reserve(bands_.size());
    for (const auto& b : bands_) out.push_back(b.name);
    return out;
}

SrfTable::SrfTable(std::vector<double> grid_nm, std::vector<std::string> band_names,
                   std::vector<std::vector<double>> sensitivities)
    : grid_(std::move(grid_nm)), names_(std::move(band_names)),
      columns_(std::move(sensitivities)) {
    if (grid_.empty()) fail(ErrorCode::EmptyTable, "SRF table has no rows");
    check_increasing(grid_, "SRF table");
    if (names_.size() != columns_.size())
        fail(ErrorCode::ShapeMismatch, "SRF table: band name / column count mismatch");
    std::set<std::string_view> seen;
    for (std::size_t k = 0; k < columns_.size(); ++k) {
        if (!seen.insert(names_[k]).second)
            fail(ErrorCode::DuplicateName, "SRF table: duplicate band '" + names_[k] + "'");
        if (columns_[k].size() != grid_.size())
            fail(ErrorCode::ShapeMismatch, "SRF table: column '" + names_[k] +
                                               "' length differs from wavelength column");
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            double v = columns_[k][i];
            if (!std::isfinite(v))
                fail(ErrorCode::NonFinite, "SRF table: band '" + names_[k] +
                                               "' has a non-finite value at " +
                                               detail::format_number(grid_[i]) + " nm");
            if (v < 0.0)
                fail(ErrorCode::NegativeSensitivity,
                     "SRF table: band '" + names_[k] + "' has negative sensitivity " +
                         detail::format_number(v) + " at " + detail::format_number(grid_[i]) +
                         " nm");
        }
    }
}

SensorSpec parse_sensor_spec(std::string_view json_text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, std::string("sensor spec: ") + e.what());
    }
    if (!doc.is_object()) fail(ErrorCode::Parse, "sensor spec: top level must be an object");
    if (!doc.contains("sensor") || !doc["sensor"].is_string())
        fail(ErrorCode::Parse, "sensor spec: missing string field 'sensor'");
    if (!doc.contains("bands") || !doc["bands"].is_array())
        fail(ErrorCode::Parse, "sensor spec: missing array field 'bands'");

    std::vector<TargetBand> bands;
    for (const auto& b : doc["bands"]) {
        if (!b.is_object() || !b.contains("name") || !b["name"].is_string() ||
            !b.contains("center_nm") || !b["center_nm"].is_number())
            fail(ErrorCode::Parse,
                 "sensor spec: each band needs a string 'name' and numeric 'center_nm'");
        bands.push_back({b["name"].get<std::string>(), b["center_nm"].get<double>()});
    }
    SensorSpec spec(doc["sensor"].get<std::string>(), std::move(bands));
    auto centers = spec.centers();
    check_units(*std::max_element(centers.begin(), centers.end()), "sensor spec");
    return spec;
}

std::string serialize_sensor_spec(const SensorSpec& spec) {
    nlohmann::ordered_json doc;
    doc["sensor"] = spec.sensor_name();
    doc["bands"] = nlohmann::ordered_json::array();
    for (const auto& b : spec.bands())
        doc["bands"].push_back({{"name", b.name}, {"center_nm", b.center_nm}});
    return doc.dump(2) + "\n";
}

SrfTable parse_srf_table(std::string_view csv_text, const SensorSpec& spec) {
    const auto lines = detail::split_lines(csv_text);
    if (lines.empty()) fail(ErrorCode::EmptyTable, "SRF table: empty document");

    const auto header = detail::split_cells(lines.front().text);
    if (header.front() != "wavelength_nm")
        fail(ErrorCode::Parse, "SRF table: first column header must be 'wavelength_nm'");
    std::unordered_map<std::string_view, std::size_t> column_of;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (!column_of.emplace(header[c], c).second)
            fail(ErrorCode::DuplicateName,
                 "SRF table: duplicate column '" + std::string(header[c]) + "'");
    }

    std::vector<std::size_t> wanted;
    for (const auto& b : spec.bands()) {
        auto it = column_of.find(b.name);
        if (it == column_of.end())
            fail(ErrorCode::MissingColumn, "SRF table: missing column for band '" + b.name + "'");
        wanted.push_back(it->second);
    }

    if (lines.size() < 2) fail(ErrorCode::EmptyTable, "SRF table: no data rows");
    std::vector<double> grid;
    std::vector<std::vector<double>> columns(spec.size());
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = detail::split_cells(lines[r].text);
        const std::string where = "SRF table line " + std::to_string(lines[r].number);
        if (cells.size() != header.size())
            fail(ErrorCode::RaggedRow, where + ": expected " + std::to_string(header.size()) +
                                           " cells, got " + std::to_string(cells.size()));
        grid.push_back(detail::parse_number(cells[0], where));
        for (std::size_t k = 0; k < wanted.size(); ++k)
            columns[k].push_back(detail::parse_number(cells[wanted[k]], where));
        // unused columns must still be numeric
        for (std::size_t c = 1; c < cells.size(); ++c) detail::parse_number(cells[c], where);
    }
    SrfTable table(std::move(grid), spec.names(), std::move(columns));
    check_units(table.grid().back(), "SRF table");
    return table;
}

std::string serialize_srf_table(const SrfTable& table) {
    std::string out = "wavelength_nm";
    for (const auto& n : table.band_names()) out += "," + n;
    out += "\n";
    for (std::size_t i = 0; i < table.grid().size(); ++i) {
        out += detail::format_number(table.grid()[i]);
        for (std::size_t k = 0; k < table.band_count(); ++k)
            out += "," + detail::format_number(table.column(k)[i]);
        out += "\n";
    }
    return out;
}

double srf_evaluate(const SrfTable& table, std::size_t band_index, double wavelength_nm) {
    if (band_index >= table.band_count())
        fail(ErrorCode::IndexOutOfRange, "SRF band index " + std::to_string(band_index) +
                                             " out of range (K = " +
                                             std::to_string(table.band_count()) + ")");
    const auto grid = table.grid();
    const auto col = table.column(band_index);
    if (!(wavelength_nm >= grid.front() && wavelength_nm <= grid.back())) return 0.0;

    // first tabulation point strictly greater than the query
    auto hi = static_cast<std::size_t>(
        std::upper_bound(grid.begin(), grid.end(), wavelength_nm) - grid.begin());
    if (grid[hi - 1] == wavelength_nm) return col[hi - 1];
    const std::size_t lo = hi - 1;
    const double t = (wavelength_nm - grid[lo]) / (grid[hi] - grid[lo]);
    return std::max(0.0, col[lo] + (col[hi] - col[lo]) * t);
}

} // namespace hsadapt

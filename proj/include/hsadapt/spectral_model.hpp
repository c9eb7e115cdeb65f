#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hsadapt {

/// Centre wavelengths (nm) of a hyperspectral sensor's bands.
/// Non-empty, strictly increasing, finite and positive.
class WavelengthGrid {
public:
    explicit WavelengthGrid(std::vector<double> values_nm);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }

    /// SHA-256 of the bit patterns; see grid_hash().
    std::string hash() const;

    friend bool operator==(const WavelengthGrid&, const WavelengthGrid&) = default;

private:
    std::vector<double> values_;
};

struct TargetBand {
    std::string name;
    double center_nm = 0.0;

    friend bool operator==(const TargetBand&, const TargetBand&) = default;
};

/// Target multispectral sensor: an ordered list of named bands. The order
/// defines the output channel order of every adaptation; centres need not
/// be sorted.
class SensorSpec {
public:
    SensorSpec(std::string sensor_name, std::vector<TargetBand> bands);

    const std::string& sensor_name() const noexcept { return name_; }
    std::span<const TargetBand> bands() const noexcept { return bands_; }
    std::size_t size() const noexcept { return bands_.size(); }
    const TargetBand& operator[](std::size_t k) const noexcept { return bands_[k]; }
    std::vector<double> centers() const;
    std::vector<std::string> names() const;

    friend bool operator==(const SensorSpec&, const SensorSpec&) = default;

private:
    std::string name_;
    std::vector<TargetBand> bands_;
};

/// Tabulated spectral response functions, one column per SensorSpec band in
/// the spec's order. Columns are not required to be normalised.
class SrfTable {
public:
    SrfTable(std::vector<double> grid_nm, std::vector<std::string> band_names,
             std::vector<std::vector<double>> sensitivities);

    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const std::string> band_names() const noexcept { return names_; }
    std::size_t band_count() const noexcept { return columns_.size(); }
    std::span<const double> column(std::size_t k) const { return columns_.at(k); }

    friend bool operator==(const SrfTable&, const SrfTable&) = default;

private:
    std::vector<double> grid_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

/// Parses the sensor JSON document
/// `{"sensor": "...", "bands": [{"name": "...", "center_nm": 665}, ...]}`.
SensorSpec parse_sensor_spec(std::string_view json_text);
std::string serialize_sensor_spec(const SensorSpec& spec);

/// Parses an SRF CSV (`wavelength_nm,<band>,...`) and aligns its columns to
/// `spec`. Columns for bands the spec does not mention are ignored.
SrfTable parse_srf_table(std::string_view csv_text, const SensorSpec& spec);
std::string serialize_srf_table(const SrfTable& table);

/// Piecewise-linear interpolation of band `band_index`'s response at
/// `wavelength_nm`. Returns exactly 0 outside the tabulated range and the
/// tabulated value, bit for bit, at tabulation points.
double srf_evaluate(const SrfTable& table, std::size_t band_index, double wavelength_nm);

/// Wavelength lists whose maximum is below this are rejected by the parsers
/// as probable micrometre values.
inline constexpr double kMinPlausibleMaxWavelengthNm = 100.0;

} // namespace hsadapt

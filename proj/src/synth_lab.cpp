#include "hsadapt/synth_lab.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "hsadapt/band_select.hpp"
#include "hsadapt/error.hpp"
#include "hsadapt/srf_resample.hpp"
#include "text.hpp"

namespace hsadapt {

void AbsorptionFeatureSpec::validate() const {
    if (!(std::isfinite(continuum) && continuum > 0.0))
        fail(ErrorCode::InvalidValue, "absorption feature: continuum must be > 0");
    if (!(std::isfinite(depth) && depth > 0.0 && depth <= continuum))
        fail(ErrorCode::InvalidValue, "absorption feature: depth must be in (0, continuum]");
    if (!(std::isfinite(fwhm_nm) && fwhm_nm > 0.0))
        fail(ErrorCode::InvalidValue, "absorption feature: fwhm must be > 0");
    if (!(std::isfinite(center_nm) && center_nm > 0.0))
        fail(ErrorCode::InvalidValue, "absorption feature: centre must be > 0");
}

double AbsorptionFeatureSpec::value_at(double wavelength_nm) const noexcept {
    const double x = (wavelength_nm - center_nm) / fwhm_nm;
    return continuum - depth * std::exp(-4.0 * std::numbers::ln2 * (x * x));
}

HyperCube gen_flat_cube(std::size_t h, std::size_t w, const WavelengthGrid& grid, float value) {
    if (!std::isfinite(value)) fail(ErrorCode::InvalidValue, "flat cube value must be finite");
    std::vector<double> wl(grid.values().begin(), grid.values().end());
    return HyperCube(h, w, std::move(wl), std::vector<float>(h * w * grid.size(), value));
}

HyperCube gen_absorption_cube(std::size_t h, std::size_t w, const WavelengthGrid& grid,
                              const AbsorptionFeatureSpec& feature) {
    feature.validate();
    if (feature.center_nm < grid.front() || feature.center_nm > grid.back())
        fail(ErrorCode::Precondition, "absorption centre " + detail::format_number(feature.center_nm) +
                                          " nm lies outside the grid span [" +
                                          detail::format_number(grid.front()) + ", " +
                                          detail::format_number(grid.back()) + "]");
    std::vector<float> spectrum(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        spectrum[j] = static_cast<float>(feature.value_at(grid[j]));
    std::vector<float> data;
    data.reserve(h * w * grid.size());
    for (std::size_t p = 0; p < h * w; ++p) data.insert(data.end(), spectrum.begin(), spectrum.end());
    return HyperCube(h, w, std::vector<double>(grid.values().begin(), grid.values().end()),
                     std::move(data));
}

HyperCube gen_random_cube(std::size_t h, std::size_t w, const WavelengthGrid& grid,
                          std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<float> data(h * w * grid.size());
    for (auto& v : data) v = static_cast<float>(engine() >> 40) * 0x1p-24f;
    return HyperCube(h, w, std::vector<double>(grid.values().begin(), grid.values().end()),
                     std::move(data));
}

AttenuationReport attenuation_experiment(const WavelengthGrid& grid, const SrfTable& table,
                                         const SensorSpec& spec,
                                         const AbsorptionFeatureSpec& feature) {
    feature.validate();
    constexpr double kCenterTolNm = 1e-9;
    std::size_t k = spec.size();
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (std::abs(spec[i].center_nm - feature.center_nm) <= kCenterTolNm) {
            k = i;
            break;
        }
    if (k == spec.size())
        fail(ErrorCode::Precondition, "feature centre " + detail::format_number(feature.center_nm) +
                                          " nm does not coincide with any band centre of '" +
                                          spec.sensor_name() + "'");
    std::size_t inside = 0;
    for (double l : grid.values())
        if (std::abs(l - feature.center_nm) <= feature.fwhm_nm / 2.0) ++inside;
    if (inside < 3)
        fail(ErrorCode::Precondition, "grid does not resolve the feature: " + std::to_string(inside) +
                                          " band centre(s) within one FWHM, need >= 3");

    const auto pixel = gen_absorption_cube(1, 1, grid, feature);
    const auto plan = nearest_band_indices(grid, spec);
    const auto weights = build_weight_matrix(grid, table, spec);
    const auto selected = apply_selection(pixel, plan);
    const auto resampled = resample_cube(pixel, weights);

    AttenuationReport r;
    r.band_index = k;
    r.band_name = spec[k].name;
    r.d_naive = feature.continuum - static_cast<double>(selected.at(0, 0, k));
    r.d_srf = feature.continuum - static_cast<double>(resampled.at(0, 0, k));
    r.retention_naive = r.d_naive / feature.depth;
    r.retention_srf = r.d_srf / feature.depth;
    r.srf_effective_width_nm = weight_summary(weights)[k].effective_width_nm;
    r.attenuation_expected = r.srf_effective_width_nm > feature.fwhm_nm;
    r.attenuated = r.d_srf < r.d_naive;
    return r;
}

std::string to_json(const AttenuationReport& report) {
    nlohmann::ordered_json doc;
    doc["band"] = report.band_name;
    doc["band_index"] = report.band_index;
    doc["d_naive"] = report.d_naive;
    doc["d_srf"] = report.d_srf;
    doc["retention_naive"] = report.retention_naive;
    doc["retention_srf"] = report.retention_srf;
    doc["srf_effective_width_nm"] = report.srf_effective_width_nm;
    doc["attenuation_expected"] = report.attenuation_expected;
    doc["attenuated"] = report.attenuated;
    return doc.dump(2) + "\n";
}

} // namespace hsadapt

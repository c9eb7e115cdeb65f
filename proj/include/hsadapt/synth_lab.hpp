#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "hsadapt/hypercube.hpp"
#include "hsadapt/spectral_model.hpp"

namespace hsadapt {

/// Gaussian absorption line on a flat continuum, all in reflectance units
/// except `center_nm` / `fwhm_nm`.
struct AbsorptionFeatureSpec {
    double continuum = 0.0;
    double center_nm = 0.0;
    double depth = 0.0;
    double fwhm_nm = 0.0;

    /// Throws InvalidValue unless continuum > 0, 0 < depth <= continuum, fwhm > 0.
    void validate() const;
    /// continuum - depth * exp(-4 ln2 (lambda - center)^2 / fwhm^2)
    double value_at(double wavelength_nm) const noexcept;
};

HyperCube gen_flat_cube(std::size_t h, std::size_t w, const WavelengthGrid& grid, float value);

/// Every pixel carries the absorption spectrum evaluated at the grid
/// centres. The feature centre must lie within the grid span.
HyperCube gen_absorption_cube(std::size_t h, std::size_t w, const WavelengthGrid& grid,
                              const AbsorptionFeatureSpec& feature);

/// Values in [0, 1): each element is the top 24 bits of successive
/// std::mt19937_64 outputs (seeded with `seed`) times 2^-24. Both the engine
/// and this mapping are fully specified, so a seed yields the same bytes on
/// every platform.
HyperCube gen_random_cube(std::size_t h, std::size_t w, const WavelengthGrid& grid,
                          std::uint64_t seed);

struct AttenuationReport {
    std::size_t band_index = 0;
    std::string band_name;
    double d_naive = 0.0;
    double d_srf = 0.0;
    double retention_naive = 0.0;
    double retention_srf = 0.0;
    double srf_effective_width_nm = 0.0;
    /// SRF effective width exceeds the feature FWHM, so attenuation is expected.
    bool attenuation_expected = false;
    /// d_srf < d_naive
    bool attenuated = false;
};

/// Measures how much of an absorption line centred on target band k's nominal
/// centre survives nearest-band selection versus SRF resampling.
/// Requires the feature centre to equal one of the sensor's band centres and
/// at least three grid centres within one FWHM of it.
AttenuationReport attenuation_experiment(const WavelengthGrid& grid, const SrfTable& table,
                                         const SensorSpec& spec,
                                         const AbsorptionFeatureSpec& feature);

std::string to_json(const AttenuationReport& report);

} // namespace hsadapt

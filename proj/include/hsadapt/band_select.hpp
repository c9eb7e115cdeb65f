#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hsadapt/hypercube.hpp"
#include "hsadapt/spectral_model.hpp"

namespace hsadapt {

/// Result of nearest-centre band selection: for each target band k, the HSI
/// band index whose centre is closest to the target's nominal centre.
struct SelectionPlan {
    std::vector<std::size_t> indices;
    std::vector<double> distances_nm;
    /// Wavelengths of the selected HSI bands, in target-band order.
    std::vector<double> selected_wavelengths_nm;
    std::vector<std::string> band_names;
    std::string source_grid_hash;
    std::size_t source_band_count = 0;

    std::size_t size() const noexcept { return indices.size(); }
    /// Target bands sharing an HSI band with an earlier target band.
    std::vector<std::size_t> repeated_targets() const;

    friend bool operator==(const SelectionPlan&, const SelectionPlan&) = default;
};

/// argmin_j |lambda_j - mu_k| per target band; ties go to the lowest index.
SelectionPlan nearest_band_indices(const WavelengthGrid& grid, const SensorSpec& spec);

/// Channel gather. The cube's wavelength list must be bit-identical to the
/// grid the plan was built from. Output band k is input band indices[k],
/// copied without arithmetic.
HyperCube apply_selection(const HyperCube& cube, const SelectionPlan& plan);

/// JSON with `indices`, `distances_nm`, `source_grid_hash` plus the
/// bookkeeping fields needed to reload the plan.
std::string serialize_plan(const SelectionPlan& plan);
SelectionPlan parse_plan(std::string_view json_text);

} // namespace hsadapt

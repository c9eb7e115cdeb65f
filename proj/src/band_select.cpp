#include "hsadapt/band_select.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <json.hpp>

#include "hsadapt/digest.hpp"
#include "hsadapt/error.hpp"

namespace hsadapt {

std::vector<std::size_t> SelectionPlan::repeated_targets() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k < indices.size(); ++k)
        if (std::find(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(k),
                      indices[k]) != indices.begin() + static_cast<std::ptrdiff_t>(k))
            out.push_back(k);
    return out;
}

SelectionPlan nearest_band_indices(const WavelengthGrid& grid, const SensorSpec& spec) {
    const auto lambda = grid.values();
    SelectionPlan plan;
    plan.source_grid_hash = grid.hash();
    plan.source_band_count = grid.size();
    plan.band_names = spec.names();
    for (const auto& band : spec.bands()) {
        const double mu = band.center_nm;
        // The grid is sorted, so the nearest centre is one of the two
        // neighbours of the insertion point. On a tie the lower one wins.
        const auto it = std::lower_bound(lambda.begin(), lambda.end(), mu);
        std::size_t best = static_cast<std::size_t>(it - lambda.begin());
        if (best == lambda.size()) {
            best = lambda.size() - 1;
        } else if (best > 0 && std::abs(lambda[best - 1] - mu) <= std::abs(lambda[best] - mu)) {
            --best;
        }
        plan.indices.push_back(best);
        plan.distances_nm.push_back(std::abs(lambda[best] - mu));
        plan.selected_wavelengths_nm.push_back(lambda[best]);
    }
    return plan;
}

HyperCube apply_selection(const HyperCube& cube, const SelectionPlan& plan) {
    if (cube.bands() != plan.source_band_count ||
        grid_hash(cube.wavelengths()) != plan.source_grid_hash)
        fail(ErrorCode::GridMismatch,
             "selection plan was built for a different wavelength grid (plan: " +
                 std::to_string(plan.source_band_count) + " bands, cube: " +
                 std::to_string(cube.bands()) + " bands)");
    for (std::size_t k = 0; k < plan.indices.size(); ++k)
        if (plan.indices[k] >= cube.bands())
            fail(ErrorCode::IndexOutOfRange, "selection index " + std::to_string(plan.indices[k]) +
                                                 " for target band " + std::to_string(k) +
                                                 " exceeds cube band count " +
                                                 std::to_string(cube.bands()));

    const std::size_t k_out = plan.indices.size();
    std::vector<double> out_wavelengths;
    out_wavelengths.reserve(k_out);
    for (auto j : plan.indices) out_wavelengths.push_back(cube.wavelengths()[j]);

    HyperCube out(cube.height(), cube.width(), std::move(out_wavelengths));
    const auto src = cube.data();
    auto dst = out.data();
    const std::size_t c_in = cube.bands();
    for (std::size_t p = 0; p < cube.pixel_count(); ++p) {
        const float* in_px = src.data() + p * c_in;
        float* out_px = dst.data() + p * k_out;
        for (std::size_t k = 0; k < k_out; ++k) out_px[k] = in_px[plan.indices[k]];
    }
    return out;
}

std::string serialize_plan(const SelectionPlan& plan) {
    nlohmann::ordered_json doc;
    doc["indices"] = plan.indices;
    doc["distances_nm"] = plan.distances_nm;
    doc["source_grid_hash"] = plan.source_grid_hash;
    doc["source_band_count"] = plan.source_band_count;
    doc["band_names"] = plan.band_names;
    doc["selected_wavelengths_nm"] = plan.selected_wavelengths_nm;
    doc["repeated_targets"] = plan.repeated_targets();
    return doc.dump(2) + "\n";
}

SelectionPlan parse_plan(std::string_view json_text) {
    try {
        const auto doc = nlohmann::json::parse(json_text);
        SelectionPlan plan;
        plan.indices = doc.at("indices").get<std::vector<std::size_t>>();
        plan.distances_nm = doc.at("distances_nm").get<std::vector<double>>();
        plan.source_grid_hash = doc.at("source_grid_hash").get<std::string>();
        plan.source_band_count = doc.at("source_band_count").get<std::size_t>();
        plan.band_names = doc.at("band_names").get<std::vector<std::string>>();
        plan.selected_wavelengths_nm = doc.at("selected_wavelengths_nm").get<std::vector<double>>();
        const auto k = plan.indices.size();
        if (plan.distances_nm.size() != k || plan.band_names.size() != k ||
            plan.selected_wavelengths_nm.size() != k)
            fail(ErrorCode::ShapeMismatch, "selection plan: field lengths disagree");
        return plan;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("selection plan: ") + e.what());
    }
}

} // namespace hsadapt

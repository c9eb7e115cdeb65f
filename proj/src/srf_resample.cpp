#include "hsadapt/srf_resample.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "hsadapt/digest.hpp"
#include "hsadapt/error.hpp"
#include "hsadapt/parallel.hpp"
#include "text.hpp"

namespace hsadapt {

WeightMatrix::WeightMatrix(std::vector<double> row_major_weights,
                           std::vector<double> source_wavelengths,
                           std::vector<std::string> band_names,
                           std::vector<double> target_centers)
    : weights_(std::move(row_major_weights)), source_wavelengths_(std::move(source_wavelengths)),
      band_names_(std::move(band_names)), target_centers_(std::move(target_centers)) {
    const std::size_t n_rows = rows();
    const std::size_t n_cols = cols();
    if (n_rows == 0 || n_cols == 0)
        fail(ErrorCode::ShapeMismatch, "weight matrix must have at least one row and column");
    if (weights_.size() != n_rows * n_cols || target_centers_.size() != n_cols)
        fail(ErrorCode::ShapeMismatch, "weight matrix: inconsistent dimensions");

    source_grid_hash_ = grid_hash(source_wavelengths_);
    support_counts_.assign(n_cols, 0);
    offsets_.assign(n_cols + 1, 0);
    for (std::size_t k = 0; k < n_cols; ++k) {
        double sum = 0.0;
        offsets_[k] = entries_.size();
        for (std::size_t j = 0; j < n_rows; ++j) {
            const double w = weights_[j * n_cols + k];
            if (!std::isfinite(w) || w < 0.0)
                fail(ErrorCode::InvalidValue, "weight matrix: entry (" + std::to_string(j) + ", " +
                                                  band_names_[k] + ") is negative or non-finite");
            if (w > 0.0) {
                entries_.push_back({j, w});
                ++support_counts_[k];
            }
            sum += w;
        }
        if (support_counts_[k] == 0)
            fail(ErrorCode::EmptySupport,
                 "weight matrix: band '" + band_names_[k] + "' has no supporting HSI band");
        if (std::abs(sum - 1.0) > kColumnSumTolerance)
            fail(ErrorCode::InvalidValue, "weight matrix: column '" + band_names_[k] +
                                              "' sums to " + detail::format_number(sum) +
                                              ", not 1");
    }
    offsets_[n_cols] = entries_.size();
}

WeightMatrix build_weight_matrix(const WavelengthGrid& grid, const SrfTable& table,
                                 const SensorSpec& spec) {
    const auto names = spec.names();
    if (table.band_count() != spec.size() ||
        !std::equal(names.begin(), names.end(), table.band_names().begin()))
        fail(ErrorCode::Precondition, "SRF table columns are not aligned with sensor '" +
                                          spec.sensor_name() + "'");

    const std::size_t c_in = grid.size();
    const std::size_t k_out = spec.size();
    std::vector<double> w(c_in * k_out);
    for (std::size_t k = 0; k < k_out; ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < c_in; ++j) {
            w[j * k_out + k] = srf_evaluate(table, k, grid[j]);
            sum += w[j * k_out + k];
        }
        if (!(sum > 0.0))
            fail(ErrorCode::EmptySupport,
                 "band '" + spec[k].name + "' (" + detail::format_number(spec[k].center_nm) +
                     " nm): no HSI band between " + detail::format_number(grid.front()) + " and " +
                     detail::format_number(grid.back()) + " nm falls inside its response");
        for (std::size_t j = 0; j < c_in; ++j) w[j * k_out + k] /= sum;
    }
    return WeightMatrix(std::move(w), std::vector<double>(grid.values().begin(), grid.values().end()),
                        names, spec.centers());
}

void resample_pixel(std::span<const float> spectrum, const WeightMatrix& weights,
                    std::span<double> out) {
    for (std::size_t k = 0; k < weights.cols(); ++k) {
        const auto support = weights.support(k);
        const double ref = spectrum[support.front().band];
        double acc = 0.0;
        for (const auto& e : support) acc += e.weight * (static_cast<double>(spectrum[e.band]) - ref);
        double value = ref + acc;
        if (!std::isfinite(value)) {
            // Infinities break the anchored form (inf - inf); use the plain sum.
            double direct = 0.0;
            for (const auto& e : support) direct += e.weight * static_cast<double>(spectrum[e.band]);
            value = direct;
        }
        out[k] = value;
    }
}

HyperCube resample_cube(const HyperCube& cube, const WeightMatrix& weights,
                        const ResampleOptions& options) {
    if (cube.bands() != weights.rows())
        fail(ErrorCode::BandCountMismatch, "cube has " + std::to_string(cube.bands()) +
                                               " bands but the weight matrix expects " +
                                               std::to_string(weights.rows()));
    if (grid_hash(cube.wavelengths()) != weights.source_grid_hash())
        fail(ErrorCode::GridMismatch,
             "weight matrix was built for a different wavelength grid than the cube");
    if (!options.allow_non_finite && !cube.all_finite())
        fail(ErrorCode::NonFinite, "cube contains non-finite values (NaN/Inf not allowed)");
    if (options.tile_size == 0) fail(ErrorCode::InvalidValue, "tile size must be positive");

    const std::size_t k_out = weights.cols();
    HyperCube out(cube.height(), cube.width(),
                  std::vector<double>(weights.target_centers().begin(),
                                      weights.target_centers().end()));

    const std::size_t tile = options.tile_size;
    const std::size_t tiles_y = (cube.height() + tile - 1) / tile;
    const std::size_t tiles_x = (cube.width() + tile - 1) / tile;
    auto dst = out.data();

    detail::parallel_for(tiles_y * tiles_x, options.threads, [&](std::size_t t) {
        const std::size_t y0 = (t / tiles_x) * tile;
        const std::size_t x0 = (t % tiles_x) * tile;
        const std::size_t y1 = std::min(y0 + tile, cube.height());
        const std::size_t x1 = std::min(x0 + tile, cube.width());
        std::vector<double> acc(k_out);
        for (std::size_t y = y0; y < y1; ++y) {
            for (std::size_t x = x0; x < x1; ++x) {
                resample_pixel(cube.pixel(y, x), weights, acc);
                float* px = dst.data() + (y * cube.width() + x) * k_out;
                for (std::size_t k = 0; k < k_out; ++k) px[k] = static_cast<float>(acc[k]);
            }
        }
    });
    return out;
}

std::vector<BandWeightSummary> weight_summary(const WeightMatrix& weights) {
    const auto lambda = weights.source_wavelengths();
    std::vector<BandWeightSummary> out;
    for (std::size_t k = 0; k < weights.cols(); ++k) {
        BandWeightSummary s;
        s.name = weights.band_names()[k];
        s.support_count = weights.support_counts()[k];
        double sum_sq = 0.0;
        for (const auto& e : weights.support(k)) {
            sum_sq += e.weight * e.weight;
            s.weighted_mean_wavelength_nm += e.weight * lambda[e.band];
            s.column_sum += e.weight;
        }
        s.effective_width_bands = 1.0 / sum_sq;

        // Local spacing: span of the support widened by one neighbour per side.
        const auto support = weights.support(k);
        const std::size_t lo = support.front().band > 0 ? support.front().band - 1 : 0;
        const std::size_t hi = std::min(support.back().band + 1, weights.rows() - 1);
        const double spacing = hi > lo ? (lambda[hi] - lambda[lo]) / static_cast<double>(hi - lo) : 0.0;
        s.effective_width_nm = s.effective_width_bands * spacing;
        out.push_back(std::move(s));
    }
    return out;
}

std::string serialize_weights_csv(const WeightMatrix& weights) {
    std::string out = "band_index,wavelength_nm";
    for (const auto& n : weights.band_names()) out += "," + n;
    out += "\n";
    for (std::size_t j = 0; j < weights.rows(); ++j) {
        out += std::to_string(j) + "," + detail::format_number(weights.source_wavelengths()[j]);
        for (std::size_t k = 0; k < weights.cols(); ++k)
            out += "," + detail::format_number(weights.at(j, k));
        out += "\n";
    }
    return out;
}

WeightMatrix parse_weights_csv(std::string_view csv_text, const SensorSpec* spec) {
    const auto lines = detail::split_lines(csv_text);
    if (lines.empty()) fail(ErrorCode::EmptyTable, "weights CSV: empty document");
    const auto header = detail::split_cells(lines.front().text);
    if (header.size() < 3 || header[0] != "band_index" || header[1] != "wavelength_nm")
        fail(ErrorCode::Parse,
             "weights CSV: header must start with 'band_index,wavelength_nm' and name a band");
    std::vector<std::string> names(header.begin() + 2, header.end());
    if (lines.size() < 2) fail(ErrorCode::EmptyTable, "weights CSV: no data rows");

    std::vector<double> wavelengths;
    std::vector<double> w;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = detail::split_cells(lines[r].text);
        const std::string where = "weights CSV line " + std::to_string(lines[r].number);
        if (cells.size() != header.size())
            fail(ErrorCode::RaggedRow, where + ": expected " + std::to_string(header.size()) +
                                           " cells, got " + std::to_string(cells.size()));
        if (detail::parse_number(cells[0], where) != static_cast<double>(r - 1))
            fail(ErrorCode::Parse, where + ": band_index out of sequence");
        wavelengths.push_back(detail::parse_number(cells[1], where));
        for (std::size_t c = 2; c < cells.size(); ++c) w.push_back(detail::parse_number(cells[c], where));
    }
    WavelengthGrid checked(wavelengths); // validates ordering

    std::vector<double> centers(names.size());
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (spec) {
            auto it = std::find_if(spec->bands().begin(), spec->bands().end(),
                                   [&](const TargetBand& b) { return b.name == names[k]; });
            if (it == spec->bands().end())
                fail(ErrorCode::MissingColumn, "weights CSV: band '" + names[k] +
                                                   "' is not in sensor '" + spec->sensor_name() + "'");
            centers[k] = it->center_nm;
        } else {
            double mean = 0.0, sum = 0.0;
            for (std::size_t j = 0; j < wavelengths.size(); ++j) {
                mean += w[j * names.size() + k] * wavelengths[j];
                sum += w[j * names.size() + k];
            }
            centers[k] = sum > 0.0 ? mean / sum : wavelengths.front();
        }
    }
    return WeightMatrix(std::move(w), std::move(wavelengths), std::move(names), std::move(centers));
}

} // namespace hsadapt

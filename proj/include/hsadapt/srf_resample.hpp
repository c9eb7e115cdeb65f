#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsadapt/hypercube.hpp"
#include "hsadapt/spectral_model.hpp"

namespace hsadapt {

/// C_in x K column-stochastic matrix mapping an HSI spectrum onto K target
/// bands. Column k holds the SRF of band k sampled at the HSI band centres,
/// normalised to sum to one.
class WeightMatrix {
public:
    /// Validates: entries finite and >= 0, every column sums to 1 within
    /// kColumnSumTolerance, every column has at least one positive entry.
    WeightMatrix(std::vector<double> row_major_weights, std::vector<double> source_wavelengths,
                 std::vector<std::string> band_names, std::vector<double> target_centers);

    std::size_t rows() const noexcept { return source_wavelengths_.size(); }
    std::size_t cols() const noexcept { return band_names_.size(); }
    double at(std::size_t j, std::size_t k) const noexcept { return weights_[j * cols() + k]; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const std::size_t> support_counts() const noexcept { return support_counts_; }
    const std::string& source_grid_hash() const noexcept { return source_grid_hash_; }
    std::span<const double> source_wavelengths() const noexcept { return source_wavelengths_; }
    std::span<const std::string> band_names() const noexcept { return band_names_; }
    std::span<const double> target_centers() const noexcept { return target_centers_; }

    /// Non-zero entries of column k, ascending in j.
    struct Entry {
        std::size_t band;
        double weight;
    };
    std::span<const Entry> support(std::size_t k) const noexcept {
        return {entries_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

    static constexpr double kColumnSumTolerance = 1e-9;

private:
    std::vector<double> weights_;
    std::vector<double> source_wavelengths_;
    std::vector<std::string> band_names_;
    std::vector<double> target_centers_;
    std::vector<std::size_t> support_counts_;
    std::string source_grid_hash_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> offsets_;
};

/// w_jk = srf_evaluate(table, k, lambda_j), then each column divided by its
/// sum. Throws EmptySupport naming the band when a column sums to zero.
WeightMatrix build_weight_matrix(const WavelengthGrid& grid, const SrfTable& table,
                                 const SensorSpec& spec);

struct ResampleOptions {
    /// Edge length, in pixels, of the square tiles handed to workers.
    std::size_t tile_size = 64;
    /// Worker count; 0 means std::thread::hardware_concurrency().
    std::size_t threads = 1;
    /// When false, any non-finite input value is an error. When true, NaN
    /// in a supported band propagates to that output band.
    bool allow_non_finite = false;
};

/// Per-pixel product X[h,w,:] * W with double accumulation. Results do not
/// depend on tile size or thread count.
HyperCube resample_cube(const HyperCube& cube, const WeightMatrix& weights,
                        const ResampleOptions& options = {});

/// Single-spectrum kernel used by resample_cube, exposed for testing.
/// Computes ref + sum_j w_j (x_j - ref) with ref the first supported band, so
/// a spectrally flat pixel maps to exactly its value.
void resample_pixel(std::span<const float> spectrum, const WeightMatrix& weights,
                    std::span<double> out);

struct BandWeightSummary {
    std::string name;
    std::size_t support_count = 0;
    /// Inverse participation ratio 1 / sum_j w_j^2, in bands.
    double effective_width_bands = 0.0;
    /// effective_width_bands times the mean HSI band spacing around the
    /// band's support.
    double effective_width_nm = 0.0;
    double weighted_mean_wavelength_nm = 0.0;
    double column_sum = 0.0;
};

std::vector<BandWeightSummary> weight_summary(const WeightMatrix& weights);

/// CSV with header `band_index,wavelength_nm,<band>...`, one row per HSI band.
std::string serialize_weights_csv(const WeightMatrix& weights);
/// Inverse of serialize_weights_csv. Target centres are taken from `spec`
/// when given (matched by band name), otherwise from each column's weighted
/// mean wavelength.
WeightMatrix parse_weights_csv(std::string_view csv_text,
                               const SensorSpec* spec = nullptr);

} // namespace hsadapt

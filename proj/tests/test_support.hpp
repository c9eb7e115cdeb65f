#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hsadapt/error.hpp"
#include "hsadapt/spectral_model.hpp"

namespace hsadapt::testing {

// Runs `fn` and returns the ErrorCode it throws, or nullopt-ish sentinel.
template <typename Fn>
bool throws_code(Fn&& fn, ErrorCode expected) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == expected;
    }
    return false;
}

inline std::vector<double> random_sorted_grid(std::mt19937_64& rng, std::size_t n, double lo = 400.0,
                                              double hi = 2500.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v;
    while (v.size() < n) {
        v.push_back(u(rng));
        if (v.size() == n) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
    return v;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

inline SensorSpec sensor_from_centers(const std::vector<double>& centers) {
    std::vector<TargetBand> bands;
    for (std::size_t k = 0; k < centers.size(); ++k)
        bands.push_back({"T" + std::to_string(k), centers[k]});
    return SensorSpec("synthetic", std::move(bands));
}

// Nominal Sentinel-2 L2A centres (B01-B12 without B10); reference data only.
inline SensorSpec sentinel2_like() {
    return SensorSpec("S2-like", {{"B01", 443}, {"B02", 490}, {"B03", 560}, {"B04", 665},
                                  {"B05", 705}, {"B06", 740}, {"B07", 783}, {"B08", 842},
                                  {"B8A", 865}, {"B09", 945}, {"B11", 1610}, {"B12", 2190}});
}

// Gaussian SRF for every band of `spec`, tabulated on integer nanometres
// and truncated at +-2 FWHM.
inline SrfTable gaussian_srf(const SensorSpec& spec, double fwhm, double lo, double hi,
                             double step = 1.0) {
    std::vector<double> tab;
    for (double x = lo; x <= hi + 1e-9; x += step) tab.push_back(x);
    std::vector<std::vector<double>> cols(spec.size(), std::vector<double>(tab.size()));
    for (std::size_t k = 0; k < spec.size(); ++k)
        for (std::size_t i = 0; i < tab.size(); ++i) {
            const double x = (tab[i] - spec[k].center_nm) / fwhm;
            cols[k][i] = std::abs(x) <= 2.0 ? std::exp(-4.0 * std::log(2.0) * x * x) : 0.0;
        }
    return SrfTable(std::move(tab), spec.names(), std::move(cols));
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("hsadapt_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace hsadapt::testing

#include <doctest.h>

#include <cmath>
#include <random>

#include "hsadapt/spectral_model.hpp"
#include "test_support.hpp"

using namespace hsadapt;
using hsadapt::testing::throws_code;

TEST_CASE("sensor spec preserves band order") {
    const auto spec = parse_sensor_spec(R"({"sensor": "pair", "bands": [
        {"name": "B04", "center_nm": 665}, {"name": "B8A", "center_nm": 865}]})");
    CHECK(spec.sensor_name() == "pair");
    REQUIRE(spec.size() == 2);
    CHECK(spec[0] == TargetBand{"B04", 665.0});
    CHECK(spec[1] == TargetBand{"B8A", 865.0});
}

TEST_CASE("sensor spec accepts a SWIR band near 2200 nm") {
    const auto spec = parse_sensor_spec(
        R"({"sensor": "swir", "bands": [{"name": "B12", "center_nm": 2200}]})");
    CHECK(spec[0].center_nm == 2200.0);
}

TEST_CASE("sensor spec centres need not be sorted") {
    const auto spec = parse_sensor_spec(R"({"sensor": "s", "bands": [
        {"name": "nir", "center_nm": 842}, {"name": "blue", "center_nm": 490}]})");
    CHECK(spec.centers() == std::vector<double>{842.0, 490.0});
}

TEST_CASE("sensor spec errors") {
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [
        {"name": "B04", "center_nm": 665}, {"name": "B04", "center_nm": 670}]})"); },
                      ErrorCode::DuplicateName));
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [
        {"name": "B04", "center_nm": 0}]})"); }, ErrorCode::InvalidValue));
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [
        {"name": "B04", "center_nm": -665}]})"); }, ErrorCode::InvalidValue));
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": []})"); },
                      ErrorCode::EmptyBands));
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [)"); },
                      ErrorCode::Parse));
    CHECK(throws_code([] { parse_sensor_spec(R"({"bands": []})"); }, ErrorCode::Parse));
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [
        {"name": "B04", "center_nm": "665"}]})"); }, ErrorCode::Parse));
    // micrometres
    CHECK(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [
        {"name": "B04", "center_nm": 0.665}]})"); }, ErrorCode::Units));
}

TEST_CASE("srf table parse echoes values") {
    const auto spec = hsadapt::testing::sensor_from_centers({500});
    const auto table = parse_srf_table("wavelength_nm,T0\n490,0.5\n500,1.0\n510,0.5\n", spec);
    CHECK(std::vector<double>(table.grid().begin(), table.grid().end()) ==
          std::vector<double>{490, 500, 510});
    CHECK(std::vector<double>(table.column(0).begin(), table.column(0).end()) ==
          std::vector<double>{0.5, 1.0, 0.5});
}

TEST_CASE("srf table aligns columns to the spec and ignores extras") {
    const SensorSpec spec("s", {{"B11", 1610}, {"B04", 665}});
    const auto table = parse_srf_table(
        "wavelength_nm,B04,extra,B11\r\n600,1,9,0\r\n700,0.5,9,0.25\r\n", spec);
    CHECK(table.band_names()[0] == "B11");
    CHECK(table.column(0)[1] == 0.25);
    CHECK(table.column(1)[0] == 1.0);
}

TEST_CASE("srf table errors") {
    const SensorSpec spec("s", {{"B04", 665}, {"B11", 1610}});
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04\n600,1\n", spec); },
                      ErrorCode::MissingColumn));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,-0.1,0\n", spec); },
                      ErrorCode::NegativeSensitivity));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n700,1,0\n600,1,0\n", spec); },
                      ErrorCode::NonMonotone));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,1,0\n600,1,0\n", spec); },
                      ErrorCode::NonMonotone));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,abc,0\n", spec); },
                      ErrorCode::NonNumeric));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,1\n", spec); },
                      ErrorCode::RaggedRow));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n", spec); },
                      ErrorCode::EmptyTable));
    CHECK(throws_code([&] { parse_srf_table("lambda,B04,B11\n600,1,1\n", spec); },
                      ErrorCode::Parse));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n0.6,1,1\n0.7,1,1\n", spec); },
                      ErrorCode::Units));
    CHECK(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,nan,1\n", spec); },
                      ErrorCode::NonFinite));
}

TEST_CASE("srf_evaluate interpolates linearly and is zero outside support") {
    const auto spec = hsadapt::testing::sensor_from_centers({500});
    const auto table = parse_srf_table("wavelength_nm,T0\n490,0\n510,1\n", spec);
    CHECK(srf_evaluate(table, 0, 500.0) == 0.5);
    CHECK(srf_evaluate(table, 0, 480.0) == 0.0);
    CHECK(srf_evaluate(table, 0, 520.0) == 0.0);
    CHECK(srf_evaluate(table, 0, 490.0) == 0.0);
    CHECK(srf_evaluate(table, 0, 510.0) == 1.0);
    CHECK(throws_code([&] { srf_evaluate(table, 1, 500.0); }, ErrorCode::IndexOutOfRange));
}

TEST_CASE("srf_evaluate reproduces tabulated values bit-exactly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto spec = hsadapt::testing::sensor_from_centers({700, 900});
    for (int trial = 0; trial < 50; ++trial) {
        auto grid = hsadapt::testing::random_sorted_grid(rng, 40, 400, 1200);
        std::vector<std::vector<double>> cols(2, std::vector<double>(grid.size()));
        for (auto& c : cols)
            for (auto& v : c) v = u(rng) / 3.0;
        const SrfTable table(grid, spec.names(), cols);
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < grid.size(); ++i)
                REQUIRE(srf_evaluate(table, k, grid[i]) == cols[k][i]);
    }
}

TEST_CASE("srf_evaluate is non-negative and continuous on the tabulated range") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto spec = hsadapt::testing::sensor_from_centers({800});
    auto grid = hsadapt::testing::random_sorted_grid(rng, 30, 500, 1100);
    std::vector<std::vector<double>> cols(1, std::vector<double>(grid.size()));
    for (auto& v : cols[0]) v = u(rng) < 0.3 ? 0.0 : u(rng);
    const SrfTable table(grid, spec.names(), cols);
    double prev = srf_evaluate(table, 0, grid.front());
    const double step = 0.01;
    double max_slope = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        max_slope = std::max(max_slope, std::abs(cols[0][i] - cols[0][i - 1]) / (grid[i] - grid[i - 1]));
    for (double x = grid.front() + step; x <= grid.back(); x += step) {
        const double v = srf_evaluate(table, 0, x);
        REQUIRE(v >= 0.0);
        REQUIRE(std::abs(v - prev) <= max_slope * step * (1 + 1e-9) + 1e-12);
        prev = v;
    }
    CHECK(srf_evaluate(table, 0, std::nextafter(grid.front(), 0.0)) == 0.0);
    CHECK(srf_evaluate(table, 0, std::nextafter(grid.back(), 1e9)) == 0.0);
}

TEST_CASE("sensor spec and srf table round-trip through their text formats") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto centers = hsadapt::testing::random_sorted_grid(rng, 5, 400, 2400);
        const auto spec = hsadapt::testing::sensor_from_centers(centers);
        const auto again = parse_sensor_spec(serialize_sensor_spec(spec));
        REQUIRE(again == spec);

        const auto grid = hsadapt::testing::random_sorted_grid(rng, 25, 380, 2500);
        std::vector<std::vector<double>> cols(spec.size(), std::vector<double>(grid.size()));
        for (auto& c : cols)
            for (auto& v : c) v = u(rng);
        const SrfTable table(grid, spec.names(), cols);
        REQUIRE(parse_srf_table(serialize_srf_table(table), spec) == table);
    }
}

TEST_CASE("wavelength grid invariants") {
    CHECK_NOTHROW(WavelengthGrid({400.0}));
    CHECK(throws_code([] { WavelengthGrid({}); }, ErrorCode::InvalidValue));
    CHECK(throws_code([] { WavelengthGrid({400.0, 400.0}); }, ErrorCode::NonMonotone));
    CHECK(throws_code([] { WavelengthGrid({500.0, 400.0}); }, ErrorCode::NonMonotone));
    CHECK(throws_code([] { WavelengthGrid({-1.0, 400.0}); }, ErrorCode::InvalidValue));
    CHECK(throws_code([] { WavelengthGrid({400.0, NAN}); }, ErrorCode::InvalidValue));
    CHECK(WavelengthGrid({400.0, 500.0}).hash() == WavelengthGrid({400.0, 500.0}).hash());
    CHECK(WavelengthGrid({400.0, 500.0}).hash() != WavelengthGrid({400.0, 500.0000001}).hash());
}

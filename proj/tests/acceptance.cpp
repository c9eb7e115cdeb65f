// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--known-red N]...
//
// Exit status is 0 when every criterion passes, or when the failing set is
// exactly the set given with --known-red. A known-red criterion that starts
// passing is also reported as a nonzero exit so the list stays honest.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hsadapt/band_select.hpp"
#include "hsadapt/cube_io.hpp"
#include "hsadapt/metrics.hpp"
#include "hsadapt/srf_resample.hpp"
#include "hsadapt/synth_lab.hpp"
#include "test_support.hpp"

using namespace hsadapt;
using hsadapt::testing::linspace;
using hsadapt::testing::throws_code;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome nearest_band_oracle() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::size_t cases = 0, ties = 0, mismatches = 0;
    const auto t0 = Clock::now();
    for (int c = 0; c < 1200; ++c) {
        std::vector<double> grid;
        std::vector<double> centers;
        std::uniform_int_distribution<int> n_bands(1, 250);
        if (c % 3 == 0) {
            // integer grid with random even gaps: midpoints are exact ties
            std::uniform_int_distribution<int> gap(1, 6);
            double x = 400.0;
            const int n = n_bands(rng);
            for (int i = 0; i < n; ++i) {
                grid.push_back(x);
                x += 2.0 * gap(rng);
            }
            std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
            for (int k = 0; k < 12; ++k) {
                const std::size_t i = pick(rng);
                if (i + 1 < grid.size()) {
                    centers.push_back(0.5 * (grid[i] + grid[i + 1]));
                    ++ties;
                } else {
                    centers.push_back(grid[i]);
                }
            }
        } else {
            grid = hsadapt::testing::random_sorted_grid(rng, static_cast<std::size_t>(n_bands(rng)));
            std::uniform_real_distribution<double> u(150.0, 2800.0);
            std::uniform_int_distribution<int> n_targets(1, 20);
            const int n = n_targets(rng);
            for (int k = 0; k < n; ++k) centers.push_back(u(rng));
        }
        const WavelengthGrid g(grid);
        const auto plan = nearest_band_indices(g, hsadapt::testing::sensor_from_centers(centers));
        for (std::size_t k = 0; k < centers.size(); ++k) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < grid.size(); ++j)
                if (std::abs(grid[j] - centers[k]) < std::abs(grid[best] - centers[k])) best = j;
            if (plan.indices[k] != best) ++mismatches;
        }
        ++cases;
    }
    const double dt = seconds_since(t0);
    o.expect(mismatches == 0, std::to_string(mismatches) + " targets disagree with exhaustive argmin");
    o.expect(dt < 1.0, "runtime " + fmt(dt) + " s >= 1 s");
    o.note(std::to_string(cases) + " cases, " + std::to_string(ties) + " engineered ties, " + fmt(dt) + " s");
    return o;
}

// ---------------------------------------------------------------------------

Outcome weight_stochasticity() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::size_t columns = 0;
    double worst_sum = 0.0;
    bool negative = false;
    for (int c = 0; c < 100; ++c) {
        std::uniform_int_distribution<int> n_grid(20, 250);
        const WavelengthGrid grid(hsadapt::testing::random_sorted_grid(rng, static_cast<std::size_t>(n_grid(rng))));
        std::uniform_int_distribution<int> n_targets(1, 8);
        const int n = n_targets(rng);
        std::vector<double> centers;
        std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
        for (int k = 0; k < n; ++k) centers.push_back(grid[pick(rng)]);
        const auto spec = hsadapt::testing::sensor_from_centers(centers);

        // random non-negative SRFs tabulated around each centre, strictly
        // positive at the centre so support is never empty
        std::vector<double> tab;
        for (double x = grid.front() - 50.0; x <= grid.back() + 50.0; x += 2.5 + 7.5 * u01(rng)) tab.push_back(x);
        std::vector<std::vector<double>> cols(centers.size(), std::vector<double>(tab.size(), 0.0));
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double half = 5.0 + 120.0 * u01(rng);
            for (std::size_t i = 0; i < tab.size(); ++i) {
                const double d = std::abs(tab[i] - centers[k]);
                if (d <= half) cols[k][i] = u01(rng) < 0.2 ? 0.0 : u01(rng);
                if (d <= half && d < 11.0) cols[k][i] += 0.5;
            }
        }
        const SrfTable table(tab, spec.names(), cols);
        const auto w = build_weight_matrix(grid, table, spec);
        for (std::size_t k = 0; k < w.cols(); ++k) {
            double sum = 0.0;
            for (std::size_t j = 0; j < w.rows(); ++j) {
                if (!(w.at(j, k) >= 0.0)) negative = true;
                sum += w.at(j, k);
            }
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            ++columns;
        }
    }
    o.expect(worst_sum <= 1e-9, "column sum deviates by " + fmt(worst_sum));
    o.expect(!negative, "negative weight entry");

    // empty support: tabulated range misses the grid, or response is zero
    // over it
    std::size_t empty_errors = 0, empty_cases = 0;
    for (int c = 0; c < 50; ++c) {
        const WavelengthGrid grid(linspace(400.0 + c, 1000.0 + c, 61));
        const SensorSpec spec("s", {{"A", 700.0}, {"Z", 1500.0 + 10.0 * c}});
        std::vector<double> tab;
        std::vector<std::vector<double>> cols(2);
        for (double x = 600.0; x <= 1600.0 + 10.0 * c + 100.0; x += 1.0) {
            tab.push_back(x);
            cols[0].push_back(std::abs(x - 700.0) < 30.0 ? 1.0 : 0.0);
            cols[1].push_back(std::abs(x - (1500.0 + 10.0 * c)) < 30.0 ? 1.0 : 0.0);
        }
        ++empty_cases;
        try {
            build_weight_matrix(grid, SrfTable(tab, spec.names(), cols), spec);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::EmptySupport && std::string(e.what()).find("'Z'") != std::string::npos)
                ++empty_errors;
        }
    }
    o.expect(empty_errors == empty_cases, "empty support raised the named error in " +
                                              std::to_string(empty_errors) + "/" + std::to_string(empty_cases));
    o.note(std::to_string(columns) + " columns over 100 pairs, max |sum-1| " + fmt(worst_sum) + ", " +
           std::to_string(empty_errors) + "/" + std::to_string(empty_cases) + " empty-support errors");
    return o;
}

// ---------------------------------------------------------------------------

struct S2Setup {
    WavelengthGrid grid{linspace(420.0, 2450.0, 202)};
    SensorSpec spec = hsadapt::testing::sentinel2_like();
    SrfTable table = hsadapt::testing::gaussian_srf(spec, 30.0, 380.0, 2300.0);
    WeightMatrix weights = build_weight_matrix(grid, table, spec);
};

Outcome resampling_algebra() {
    Outcome o;
    const S2Setup s;
    const auto& w = s.weights;

    // constant preservation, checked before float rounding
    const auto flat = gen_flat_cube(3, 3, s.grid, 0.7f);
    std::vector<double> acc(w.cols());
    resample_pixel(flat.pixel(1, 1), w, acc);
    bool exact = std::all_of(acc.begin(), acc.end(), [](double v) { return v == static_cast<double>(0.7f); });
    o.expect(exact, "flat 0.7 not preserved exactly in double");
    const auto flat_out = resample_cube(flat, w);
    o.expect(std::all_of(flat_out.data().begin(), flat_out.data().end(), [](float v) { return v == 0.7f; }),
             "flat 0.7 not preserved in storage");

    // linearity: R(a x + b y) vs a R(x) + b R(y)
    const auto x = gen_random_cube(8, 8, s.grid, 11);
    const auto y = gen_random_cube(8, 8, s.grid, 12);
    const float a = 0.375f, b = 1.25f;
    HyperCube mix(8, 8, std::vector<double>(s.grid.values().begin(), s.grid.values().end()));
    for (std::size_t i = 0; i < mix.data().size(); ++i) mix.data()[i] = a * x.data()[i] + b * y.data()[i];
    const auto rx = resample_cube(x, w), ry = resample_cube(y, w), rm = resample_cube(mix, w);
    double worst_lin = 0.0;
    for (std::size_t i = 0; i < rm.data().size(); ++i) {
        const double expect = a * static_cast<double>(rx.data()[i]) + b * static_cast<double>(ry.data()[i]);
        worst_lin = std::max(worst_lin, std::abs(rm.data()[i] - expect) / std::abs(expect));
    }
    o.expect(worst_lin <= 1e-6, "linearity relative error " + fmt(worst_lin));

    // convex bounds over each band's support
    bool bounded = true;
    for (std::size_t p = 0; p < x.pixel_count(); ++p) {
        const auto px = x.data().subspan(p * x.bands(), x.bands());
        for (std::size_t k = 0; k < w.cols(); ++k) {
            float lo = std::numeric_limits<float>::max(), hi = std::numeric_limits<float>::lowest();
            for (const auto& e : w.support(k)) {
                lo = std::min(lo, px[e.band]);
                hi = std::max(hi, px[e.band]);
            }
            const float v = rx.data()[p * w.cols() + k];
            const float lo_ulp = std::nextafter(lo, -INFINITY), hi_ulp = std::nextafter(hi, INFINITY);
            if (v < lo_ulp || v > hi_ulp) bounded = false;
        }
    }
    o.expect(bounded, "output outside the support's [min, max] by more than one ulp");

    // tiling and threading
    const auto big = gen_random_cube(130, 97, s.grid, 5);
    const auto reference = encode_cube(resample_cube(big, w, {.tile_size = 64, .threads = 1}));
    std::size_t configs = 0;
    for (std::size_t tile : {std::size_t{1}, std::size_t{64}, std::size_t{130}})
        for (std::size_t threads : {std::size_t{1}, std::size_t{4}}) {
            o.expect(encode_cube(resample_cube(big, w, {.tile_size = tile, .threads = threads})) == reference,
                     "tile " + std::to_string(tile) + ", threads " + std::to_string(threads) + " differs");
            ++configs;
        }
    o.note("linearity max rel " + fmt(worst_lin) + ", " + std::to_string(configs) +
           " tile/thread configurations bit-identical");
    return o;
}

// ---------------------------------------------------------------------------

Outcome double_loop_oracle() {
    Outcome o;
    const auto t0 = Clock::now();
    const S2Setup s;
    const auto cube = gen_random_cube(16, 16, s.grid, 2024);
    const auto out = resample_cube(cube, s.weights);
    double worst = 0.0;
    const auto& w = s.weights;
    for (std::size_t p = 0; p < cube.pixel_count(); ++p)
        for (std::size_t k = 0; k < w.cols(); ++k) {
            double ref = 0.0;
            for (std::size_t j = 0; j < w.rows(); ++j)
                ref += static_cast<double>(cube.data()[p * w.rows() + j]) * w.at(j, k);
            worst = std::max(worst, std::abs(out.data()[p * w.cols() + k] - ref) / std::abs(ref));
        }
    const double dt = seconds_since(t0);
    o.expect(worst <= 1e-6, "relative error " + fmt(worst));
    o.expect(dt < 5.0, "runtime " + fmt(dt) + " s >= 5 s");
    o.note("max rel " + fmt(worst) + ", " + fmt(dt) + " s");
    return o;
}

// ---------------------------------------------------------------------------

Outcome low_pass() {
    Outcome o;
    std::vector<double> v;
    for (double x = 400.0; x <= 1000.0; x += 5.0) v.push_back(x);
    const WavelengthGrid grid(v);
    const SensorSpec spec("s", {{"B04", 665.0}, {"B05", 700.0}});
    std::vector<double> tab;
    std::vector<std::vector<double>> cols(2);
    for (double x = 600.0; x <= 800.0; x += 1.0) {
        tab.push_back(x);
        for (std::size_t k = 0; k < 2; ++k) {
            const double d = (x - spec[k].center_nm) / 60.0;
            cols[k].push_back(std::exp(-4.0 * std::log(2.0) * d * d));
        }
    }
    const SrfTable table(tab, spec.names(), cols);
    const auto r = attenuation_experiment(grid, table, spec, {0.7, 700.0, 0.2, 10.0});
    o.expect(r.d_srf < r.d_naive, "d_srf " + fmt(r.d_srf) + " not below d_naive " + fmt(r.d_naive));
    o.expect(r.retention_naive >= 0.99, "naive retention " + fmt(r.retention_naive));
    // regression constant from the independent numpy oracle
    o.expect(std::abs(r.retention_srf - 0.16440844535827615) <= 1e-6,
             "srf retention " + fmt(r.retention_srf) + " drifted from 0.164408");
    o.note("d_naive " + fmt(r.d_naive) + ", d_srf " + fmt(r.d_srf) + ", retention " + fmt(r.retention_srf));
    return o;
}

// ---------------------------------------------------------------------------

Outcome metrics_values() {
    Outcome o;
    {
        const LabelMask pred(2, 2, {0, 0, 1, 1}), truth(2, 2, {0, 1, 1, 1});
        const auto cm = accumulate_confusion(pred, truth, 2, -1, ConfusionMatrix(2));
        o.expect(cm.count(0, 0) == 1 && cm.count(0, 1) == 0 && cm.count(1, 0) == 1 && cm.count(1, 1) == 2,
                 "2x2 confusion counts");
        const double m = miou(cm).miou;
        o.expect(m == (0.5 + 2.0 / 3.0) / 2.0 && std::abs(m - 7.0 / 12.0) <= 1e-15, "2x2 miou " + fmt(m));
        const auto perfect = accumulate_confusion(truth, truth, 2, -1, ConfusionMatrix(2));
        o.expect(miou(perfect).miou == 1.0, "perfect miou");
    }
    {
        TargetTable train;
        train.parameter_names = {"K", "P2O5", "Mg", "pH"};
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.0, 500.0);
        for (int r = 0; r < 40; ++r) {
            train.sample_ids.push_back("id" + std::to_string(r));
            for (int c = 0; c < 4; ++c) train.values.push_back(u(rng));
        }
        o.expect(score_regression(train, train, train).nmse == 0.0, "perfect nmse");
        TargetTable mean_pred = train;
        for (std::size_t c = 0; c < 4; ++c) {
            double mean = 0.0;
            for (std::size_t r = 0; r < train.rows(); ++r) mean += train.at(r, c);
            mean /= static_cast<double>(train.rows());
            for (std::size_t r = 0; r < train.rows(); ++r) mean_pred.values[r * 4 + c] = mean;
        }
        const double n = score_regression(mean_pred, train, train).nmse;
        o.expect(std::abs(n - 4.0) <= 1e-12, "mean predictor nmse " + fmt(n) + " != 4");
    }
    {
        std::mt19937_64 rng(99);
        double worst = 0.0;
        for (int c = 0; c < 100; ++c) {
            const std::size_t h = 1 + rng() % 20, w = 1 + rng() % 20, n = 2 + rng() % 6;
            std::vector<std::int16_t> p(h * w), t(h * w);
            for (std::size_t i = 0; i < p.size(); ++i) {
                p[i] = static_cast<std::int16_t>(rng() % n);
                t[i] = rng() % 7 == 0 ? std::int16_t{-1} : static_cast<std::int16_t>(rng() % n);
            }
            std::vector<std::int16_t> perm(n);
            std::iota(perm.begin(), perm.end(), std::int16_t{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            auto pp = p, tt = t;
            for (auto& v : pp) v = perm[static_cast<std::size_t>(v)];
            for (auto& v : tt)
                if (v >= 0) v = perm[static_cast<std::size_t>(v)];
            const double a = miou(accumulate_confusion(LabelMask(h, w, p), LabelMask(h, w, t), n, -1, ConfusionMatrix(n))).miou;
            const double b = miou(accumulate_confusion(LabelMask(h, w, pp), LabelMask(h, w, tt), n, -1, ConfusionMatrix(n))).miou;
            worst = std::max(worst, std::abs(a - b));
        }
        o.expect(worst <= 1e-12, "permutation changed miou by " + fmt(worst));
        o.note("7/12 exact, nmse(mean) = 4, permutation max |dmiou| " + fmt(worst));
    }
    return o;
}

// ---------------------------------------------------------------------------

std::string hsc_with_header(const std::string& magic, const std::string& header, const std::string& payload) {
    std::string out = magic;
    std::uint64_t n = header.size();
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
    return out + header + payload;
}

Outcome formats() {
    Outcome o;
    std::mt19937_64 rng(31);
    std::size_t round_trips = 0;
    for (int c = 0; c < 50; ++c) {
        const std::size_t h = 1 + rng() % 17, w = 1 + rng() % 17, bands = 1 + rng() % 40;
        const WavelengthGrid grid(hsadapt::testing::random_sorted_grid(rng, bands));
        const auto cube = gen_random_cube(h, w, grid, rng());
        const auto bytes = encode_cube(cube);
        const auto back = decode_cube(bytes);
        std::vector<std::int16_t> labels(h * w);
        for (auto& v : labels) v = static_cast<std::int16_t>(static_cast<int>(rng() % 30) - 1);
        const LabelMask mask(h, w, labels);
        const auto mbytes = encode_mask(mask);
        const auto mback = decode_mask(mbytes);
        const bool ok = back == cube && encode_cube(back) == bytes && mback == mask && encode_mask(mback) == mbytes;
        if (ok) ++round_trips;
    }
    o.expect(round_trips == 50, std::to_string(round_trips) + "/50 round trips byte-identical");

    // the stated payload size for a 128x128x202 chip
    const std::size_t payload = cube_payload_bytes(128, 128, 202);
    const auto chip = gen_flat_cube(128, 128, WavelengthGrid(linspace(420.0, 2450.0, 202)), 0.25f);
    const auto chip_bytes = encode_cube(chip);
    std::uint64_t header_len = 0;
    for (int i = 0; i < 8; ++i)
        header_len |= static_cast<std::uint64_t>(static_cast<unsigned char>(chip_bytes[4 + i])) << (8 * i);
    o.expect(chip_bytes.size() == 12 + header_len + payload, "file size is not magic + header + payload");
    o.expect(payload == 13'303'808, "128x128x202 float32 payload is " + std::to_string(payload) +
                                        " bytes (128*128*202*4), not the stated 13303808 (= 203 bands)");

    // documented error cases, each with its named error
    std::size_t checked = 0;
    auto err = [&](bool ok, const std::string& what) {
        o.expect(ok, "error case: " + what);
        ++checked;
    };
    const auto small = encode_cube(gen_random_cube(2, 3, WavelengthGrid({450, 550}), 1));
    const std::string pay2(8, '\0');
    err(throws_code([&] { decode_cube("XYZW" + small.substr(4)); }, ErrorCode::BadMagic), "bad magic");
    err(throws_code([&] { decode_cube(small.substr(0, small.size() - 3)); }, ErrorCode::LengthMismatch), "short payload");
    err(throws_code([&] { decode_cube(small + "x"); }, ErrorCode::LengthMismatch), "trailing payload");
    err(throws_code([&] { decode_cube(hsc_with_header("HSC1", R"({"c":2,"dtype":"f32le","h":1,"layout":"bip","w":1,"wavelengths_nm":[500]})", pay2)); },
                    ErrorCode::LengthMismatch), "header count vs wavelengths");
    err(throws_code([&] { decode_cube(hsc_with_header("HSC1", R"({"c":2,"dtype":"f32le","h":1,"layout":"bip","w":1,"wavelengths_nm":[600,500]})", pay2)); },
                    ErrorCode::NonMonotone), "non-monotone wavelengths");
    err(throws_code([&] { decode_cube("HSC2" + small.substr(4)); }, ErrorCode::UnsupportedVersion), "unsupported version");
    const auto nan_bytes = encode_cube(HyperCube(1, 1, {500, 600}, {1.0f, std::numeric_limits<float>::quiet_NaN()}));
    err(throws_code([&] { decode_cube(nan_bytes); }, ErrorCode::NonFinite), "non-finite without allow flag");
    const auto mbytes = encode_mask(LabelMask(2, 2, {0, 1, -1, 2}));
    err(throws_code([&] { decode_mask("HSX1" + mbytes.substr(4)); }, ErrorCode::BadMagic), "mask bad magic");
    err(throws_code([&] { decode_mask(mbytes.substr(0, mbytes.size() - 1)); }, ErrorCode::LengthMismatch), "mask short payload");
    err(throws_code([&] { decode_mask("HSM2" + mbytes.substr(4)); }, ErrorCode::UnsupportedVersion), "mask version");
    err(throws_code([] { read_targets_csv("sample_id,K\na,1,2\n"); }, ErrorCode::RaggedRow), "targets ragged row");
    err(throws_code([] { read_targets_csv("sample_id,K\na,x\n"); }, ErrorCode::NonNumeric), "targets non-numeric");
    err(throws_code([] { read_targets_csv("sample_id,K\na,1\na,2\n"); }, ErrorCode::DuplicateName), "targets duplicate id");

    // the other modules' documented errors
    err(throws_code([] { parse_sensor_spec(R"({"sensor": "d", "bands": [)"); }, ErrorCode::Parse), "sensor malformed");
    err(throws_code([] { parse_sensor_spec(R"({"sensor":"d","bands":[{"name":"A","center_nm":500},{"name":"A","center_nm":600}]})"); },
                    ErrorCode::DuplicateName), "sensor duplicate band");
    err(throws_code([] { parse_sensor_spec(R"({"sensor":"d","bands":[{"name":"A","center_nm":0}]})"); },
                    ErrorCode::InvalidValue), "sensor non-positive centre");
    err(throws_code([] { parse_sensor_spec(R"({"sensor":"d","bands":[]})"); }, ErrorCode::EmptyBands), "sensor empty bands");
    const SensorSpec two("d", {{"B04", 665.0}, {"B11", 1610.0}});
    err(throws_code([&] { parse_srf_table("wavelength_nm,B04\n600,1\n", two); }, ErrorCode::MissingColumn), "srf missing column");
    err(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,-0.1,0\n", two); }, ErrorCode::NegativeSensitivity),
        "srf negative sensitivity");
    err(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n700,1,0\n600,1,0\n", two); }, ErrorCode::NonMonotone),
        "srf non-monotone");
    err(throws_code([&] { parse_srf_table("wavelength_nm,B04,B11\n600,abc,0\n", two); }, ErrorCode::NonNumeric),
        "srf non-numeric");

    const S2Setup s;
    const auto cube = gen_random_cube(2, 2, s.grid, 3);
    auto plan = nearest_band_indices(s.grid, s.spec);
    auto bad_hash = plan;
    bad_hash.source_grid_hash = "0";
    err(throws_code([&] { apply_selection(cube, bad_hash); }, ErrorCode::GridMismatch), "selection grid mismatch");
    auto bad_index = plan;
    bad_index.indices[0] = 999;
    err(throws_code([&] { apply_selection(cube, bad_index); }, ErrorCode::IndexOutOfRange), "selection index out of range");
    const auto shifted = gen_random_cube(2, 2, WavelengthGrid(linspace(421.0, 2451.0, 202)), 3);
    err(throws_code([&] { resample_cube(shifted, s.weights); }, ErrorCode::GridMismatch), "resample grid hash");
    const auto fewer = gen_random_cube(2, 2, WavelengthGrid(linspace(420.0, 2450.0, 201)), 3);
    err(throws_code([&] { resample_cube(fewer, s.weights); }, ErrorCode::BandCountMismatch), "resample band count");
    err(throws_code([] { accumulate_confusion(LabelMask(1, 2, {0, 0}), LabelMask(2, 1, {0, 0}), 2, -1, ConfusionMatrix(2)); },
                    ErrorCode::ShapeMismatch), "confusion shape mismatch");
    err(throws_code([] { accumulate_confusion(LabelMask(1, 1, {5}), LabelMask(1, 1, {0}), 2, -1, ConfusionMatrix(2)); },
                    ErrorCode::IndexOutOfRange), "confusion label out of range");
    err(throws_code([] { miou(ConfusionMatrix(3)); }, ErrorCode::NoUnion), "all unions zero");
    const std::vector<double> flat_train{1, 2, 1, 3};
    err(throws_code([&] { baseline_mse(flat_train, 2); }, ErrorCode::DegenerateBaseline), "degenerate baseline");
    const std::vector<double> p3{1, 2, 3}, t2{1, 2}, base{1.0};
    err(throws_code([&] { nmse(p3, t2, 1, base); }, ErrorCode::ShapeMismatch), "nmse shape mismatch");
    const std::vector<double> pnan{1, NAN};
    err(throws_code([&] { nmse(pnan, t2, 1, base); }, ErrorCode::NonFinite), "nmse non-finite");

    o.note(std::to_string(round_trips) + "/50 round trips, payload " + std::to_string(payload) + " bytes, " +
           std::to_string(checked) + " error cases");
    return o;
}

// ---------------------------------------------------------------------------

Outcome throughput() {
    Outcome o;
    const S2Setup s;
    const auto chip = gen_random_cube(128, 128, s.grid, 8);
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = Clock::now();
        const auto w = build_weight_matrix(s.grid, s.table, s.spec);
        const auto out = resample_cube(chip, w, {.tile_size = 64, .threads = 1});
        best = std::min(best, seconds_since(t0));
        if (out.bands() != 12) o.expect(false, "output has " + std::to_string(out.bands()) + " bands");
    }
    o.expect(best < 1.0, "best of 3 took " + fmt(best) + " s");
    o.note("128x128x202 -> 12 bands, single thread, best of 3: " + fmt(best * 1e3) + " ms");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> known_red;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--known-red" && i + 1 < argc) {
            known_red.insert(std::stoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--known-red N]...\n", argv[0]);
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"nearest-band selection matches exhaustive argmin", nearest_band_oracle},
        {"SRF weight columns are stochastic; empty support errors", weight_stochasticity},
        {"resampling algebra and tile/thread invariance", resampling_algebra},
        {"resample_cube matches the double-loop oracle", double_loop_oracle},
        {"SRF resampling attenuates a narrow absorption line", low_pass},
        {"segmentation and regression metric values", metrics_values},
        {"cube/mask formats, payload size and error cases", formats},
        {"128x128x202 chip adapted in under 1 s single-threaded", throughput},
    };

    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.notes.push_back(std::string("unexpected exception: ") + e.what());
        }
        if (!out.pass) failed.insert(id);
        std::printf("%s  [%d] %s%s\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    !out.pass && known_red.count(id) ? "  (known red)" : "");
        for (const auto& n : out.notes) std::printf("        %s\n", n.c_str());
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
    if (failed == known_red) return 0;
    for (int id : known_red)
        if (!failed.count(id)) std::printf("criterion %d is listed as known red but passes\n", id);
    return 1;
}

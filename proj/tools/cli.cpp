#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsadapt/band_select.hpp"
#include "hsadapt/cube_io.hpp"
#include "hsadapt/digest.hpp"
#include "hsadapt/error.hpp"
#include "hsadapt/metrics.hpp"
#include "hsadapt/parallel.hpp"
#include "hsadapt/spectral_model.hpp"
#include "hsadapt/srf_resample.hpp"
#include "hsadapt/synth_lab.hpp"

namespace hsadapt::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

std::size_t default_threads() {
    if (const char* env = std::getenv("HSADAPT_THREADS")) {
        try {
            const auto n = std::stoul(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        fail(ErrorCode::Usage, std::string("HSADAPT_THREADS must be a positive integer, got '") +
                                   env + "'");
    }
    return 1;
}

// Provenance record written next to every output as <output>.manifest.json.
class Manifest {
public:
    explicit Manifest(std::string subcommand) : start_(Clock::now()) {
        doc_["tool"] = "hsadapt";
        doc_["version"] = HSADAPT_VERSION;
        doc_["subcommand"] = std::move(subcommand);
        doc_["parameters"] = Json::object();
        doc_["inputs"] = Json::object();
        doc_["outputs"] = Json::object();
    }

    template <typename T>
    void param(const std::string& key, const T& value) { doc_["parameters"][key] = value; }
    void input(const std::string& path) { doc_["inputs"][path] = sha256_file(path); }
    void output(const std::string& path) { doc_["outputs"][path] = sha256_file(path); }
    template <typename T>
    void extra(const std::string& key, const T& value) { doc_[key] = value; }

    void write_next_to(const std::string& primary_output) {
        const double secs = std::chrono::duration<double>(Clock::now() - start_).count();
        doc_["wall_time_s"] = secs;
        spit(primary_output + ".manifest.json", doc_.dump(2) + "\n");
    }

private:
    Json doc_;
    Clock::time_point start_;
};

WavelengthGrid grid_of(const HyperCube& cube) {
    return WavelengthGrid(std::vector<double>(cube.wavelengths().begin(), cube.wavelengths().end()));
}

// ---------------------------------------------------------------- adapt

struct AdaptArgs {
    std::string method;
    std::string sensor;
    std::string input;
    std::string output;
    std::string srf;
    std::string save_plan;
    std::string save_weights;
    std::size_t threads = 1;
    std::size_t tile = 64;
    bool allow_nan = false;
};

int cmd_adapt(const AdaptArgs& a, std::ostream& out) {
    if (a.method == "srf" && a.srf.empty())
        fail(ErrorCode::Usage, "--method srf requires --srf <table.csv>");
    if (a.method == "naive" && !a.srf.empty())
        fail(ErrorCode::Usage, "--srf is only valid with --method srf");
    if (a.method == "naive" && !a.save_weights.empty())
        fail(ErrorCode::Usage, "--save-weights is only valid with --method srf");
    if (a.method == "srf" && !a.save_plan.empty())
        fail(ErrorCode::Usage, "--save-plan is only valid with --method naive");

    Manifest manifest("adapt");
    manifest.param("method", a.method);
    manifest.param("threads", a.threads);
    manifest.param("tile", a.tile);
    manifest.param("allow_nan", a.allow_nan);

    const auto spec = parse_sensor_spec(slurp(a.sensor));
    manifest.input(a.sensor);
    CubeReadOptions read_opts;
    read_opts.allow_non_finite = a.allow_nan;
    const auto cube = read_cube_file(a.input, read_opts);
    manifest.input(a.input);
    const auto grid = grid_of(cube);

    HyperCube result;
    if (a.method == "naive") {
        const auto plan = nearest_band_indices(grid, spec);
        result = apply_selection(cube, plan);
        const auto text = serialize_plan(plan);
        manifest.extra("selection_plan_sha256", sha256_hex(text));
        manifest.extra("selection_plan", Json::parse(text));
        if (!a.save_plan.empty()) spit(a.save_plan, text);
    } else {
        const auto table = parse_srf_table(slurp(a.srf), spec);
        manifest.input(a.srf);
        const auto weights = build_weight_matrix(grid, table, spec);
        ResampleOptions opts;
        opts.threads = a.threads;
        opts.tile_size = a.tile;
        opts.allow_non_finite = a.allow_nan;
        result = resample_cube(cube, weights, opts);
        const auto csv = serialize_weights_csv(weights);
        manifest.extra("weight_matrix_sha256", sha256_hex(csv));
        if (!a.save_weights.empty()) spit(a.save_weights, csv);
    }
    write_cube_file(a.output, result);
    manifest.output(a.output);
    manifest.write_next_to(a.output);

    out << "wrote " << a.output << ": " << result.height() << "x" << result.width() << "x"
        << result.bands() << " (" << a.method << ", sensor '" << spec.sensor_name() << "')\n";
    return kExitOk;
}

// ---------------------------------------------------------------- metrics

struct ReportOutput {
    std::string out_path;
    bool text = false;
};

void emit_report(const ReportOutput& ro, const std::string& json, const std::string& text,
                 Manifest& manifest, std::ostream& out) {
    if (!ro.out_path.empty()) {
        spit(ro.out_path, json);
        manifest.output(ro.out_path);
        manifest.write_next_to(ro.out_path);
        out << text;
    } else {
        out << (ro.text ? text : json);
    }
}

std::map<std::string, fs::path> files_by_stem(const std::string& dir) {
    if (!fs::is_directory(dir)) fail(ErrorCode::Io, "'" + dir + "' is not a directory");
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto stem = entry.path().stem().string();
        if (!out.emplace(stem, entry.path()).second)
            fail(ErrorCode::DuplicateName, "two files share the stem '" + stem + "' in " + dir);
    }
    return out;
}

struct SegArgs {
    std::string pred_dir;
    std::string truth_dir;
    std::size_t classes = 0;
    int ignore = -1;
    bool per_chip = false;
    std::size_t threads = 1;
    ReportOutput report;
};

int cmd_metrics_seg(const SegArgs& a, std::ostream& out) {
    if (a.ignore < std::numeric_limits<std::int16_t>::min() ||
        a.ignore > std::numeric_limits<std::int16_t>::max())
        fail(ErrorCode::Usage, "--ignore must fit in a 16-bit signed integer");
    Manifest manifest("metrics seg");
    manifest.param("classes", a.classes);
    manifest.param("ignore", a.ignore);
    manifest.param("per_chip", a.per_chip);

    const auto preds = files_by_stem(a.pred_dir);
    const auto truths = files_by_stem(a.truth_dir);
    std::vector<std::string> missing;
    for (const auto& [stem, _] : truths)
        if (!preds.count(stem)) missing.push_back(stem + " (no prediction)");
    for (const auto& [stem, _] : preds)
        if (!truths.count(stem)) missing.push_back(stem + " (no truth)");
    if (!missing.empty()) {
        std::string msg = "unpaired files:";
        for (const auto& m : missing) msg += " " + m;
        fail(ErrorCode::UnpairedFiles, msg);
    }
    if (truths.empty()) fail(ErrorCode::EmptyTable, "no masks found in " + a.truth_dir);

    std::vector<std::pair<fs::path, fs::path>> pairs;
    for (const auto& [stem, path] : truths) pairs.emplace_back(preds.at(stem), path);

    const auto ignore = static_cast<std::int16_t>(a.ignore);
    std::vector<ConfusionMatrix> chips(pairs.size(), ConfusionMatrix(a.classes));
    detail::parallel_for(pairs.size(), a.threads, [&](std::size_t i) {
        const auto pred = read_mask_file(pairs[i].first.string());
        const auto truth = read_mask_file(pairs[i].second.string());
        try {
            chips[i].accumulate(pred, truth, ignore);
        } catch (const Error& e) {
            throw Error(e.code(), pairs[i].second.stem().string() + ": " + e.what());
        }
    });
    ConfusionMatrix pooled(a.classes);
    for (const auto& c : chips) pooled.merge(c);
    for (const auto& [p, t] : pairs) {
        manifest.input(p.string());
        manifest.input(t.string());
    }

    auto report = miou(pooled);
    Json doc = Json::parse(to_json(report));
    doc["chips"] = pairs.size();
    doc["ignored_pixels"] = pooled.ignored_pixels();
    doc["counted_pixels"] = pooled.counted_pixels();
    std::string text = to_text(report);
    if (a.per_chip) {
        const double macro = mean_per_chip_miou(chips);
        doc["per_chip_miou"] = macro;
        std::ostringstream ss;
        ss << "per-chip mean mIoU: " << macro << "\n";
        text += ss.str();
    }
    emit_report(a.report, doc.dump(2) + "\n", text, manifest, out);
    return kExitOk;
}

struct RegArgs {
    std::string pred;
    std::string truth;
    std::string train;
    ReportOutput report;
};

int cmd_metrics_reg(const RegArgs& a, std::ostream& out) {
    Manifest manifest("metrics reg");
    auto load = [&](const std::string& path) {
        try {
            auto t = read_targets_csv(slurp(path));
            manifest.input(path);
            return t;
        } catch (const Error& e) {
            throw Error(e.code(), path + ": " + e.what());
        }
    };
    const auto pred = load(a.pred);
    const auto truth = load(a.truth);
    const auto train = load(a.train);
    const auto report = score_regression(pred, truth, train);
    emit_report(a.report, to_json(report), to_text(report), manifest, out);
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct GridArgs {
    double start = 420.0;
    double step = 10.0;
    std::size_t bands = 202;
    std::string from;
};

WavelengthGrid make_grid(const GridArgs& g) {
    if (!g.from.empty()) {
        CubeReadOptions opts;
        opts.allow_non_finite = true;
        return grid_of(read_cube_file(g.from, opts));
    }
    if (g.bands == 0 || !(g.step > 0.0)) fail(ErrorCode::Usage, "--bands and --grid-step must be positive");
    std::vector<double> v(g.bands);
    for (std::size_t j = 0; j < g.bands; ++j) v[j] = g.start + g.step * static_cast<double>(j);
    return WavelengthGrid(std::move(v));
}

void add_grid_options(CLI::App* sub, GridArgs& g) {
    sub->add_option("--grid-start", g.start, "First band centre (nm)")->capture_default_str();
    sub->add_option("--grid-step", g.step, "Band spacing (nm)")->capture_default_str();
    sub->add_option("--bands", g.bands, "Number of bands")->capture_default_str();
    sub->add_option("--grid-from", g.from, "Copy the wavelength grid of an HSC-v1 cube");
}

struct SynthArgs {
    GridArgs grid;
    std::size_t h = 128;
    std::size_t w = 128;
    float value = 0.0f;
    std::uint64_t seed = 0;
    AbsorptionFeatureSpec feature{0.7, 0.0, 0.2, 10.0};
    std::optional<double> center;
    std::string sensor;
    std::string srf;
    double srf_fwhm = 30.0;
    double srf_step = 1.0;
    std::string output;
};

void write_synth_cube(const std::string& generator, const SynthArgs& a, const HyperCube& cube,
                      Manifest& manifest, std::ostream& out) {
    const std::string path = a.output.empty() ? generator + ".hsc" : a.output;
    write_cube_file(path, cube);
    manifest.output(path);
    manifest.write_next_to(path);
    out << "wrote " << path << ": " << cube.height() << "x" << cube.width() << "x" << cube.bands()
        << "\n";
}

int cmd_synth(const std::string& generator, SynthArgs a, std::ostream& out) {
    Manifest manifest("synth " + generator);
    manifest.param("h", a.h);
    manifest.param("w", a.w);
    if (!a.grid.from.empty()) manifest.input(a.grid.from);

    if (generator == "flat") {
        manifest.param("value", a.value);
        const auto grid = make_grid(a.grid);
        write_synth_cube(generator, a, gen_flat_cube(a.h, a.w, grid, a.value), manifest, out);
    } else if (generator == "random") {
        manifest.param("seed", a.seed);
        const auto grid = make_grid(a.grid);
        write_synth_cube(generator, a, gen_random_cube(a.h, a.w, grid, a.seed), manifest, out);
    } else if (generator == "absorption") {
        const auto grid = make_grid(a.grid);
        a.feature.center_nm = a.center.value_or(grid[grid.size() / 2]);
        manifest.param("continuum", a.feature.continuum);
        manifest.param("depth", a.feature.depth);
        manifest.param("fwhm", a.feature.fwhm_nm);
        manifest.param("center", a.feature.center_nm);
        write_synth_cube(generator, a, gen_absorption_cube(a.h, a.w, grid, a.feature), manifest, out);
    } else if (generator == "srf") {
        // Gaussian responses centred on each band; a stand-in when official
        // tabulations are not at hand.
        if (!(a.srf_fwhm > 0.0) || !(a.srf_step > 0.0))
            fail(ErrorCode::Usage, "--srf-fwhm and --srf-step must be positive");
        const auto spec = parse_sensor_spec(slurp(a.sensor));
        manifest.input(a.sensor);
        manifest.param("srf_fwhm", a.srf_fwhm);
        manifest.param("srf_step", a.srf_step);
        const auto centers = spec.centers();
        const double lo = std::max(a.srf_step, *std::min_element(centers.begin(), centers.end()) - 2 * a.srf_fwhm);
        const double hi = *std::max_element(centers.begin(), centers.end()) + 2 * a.srf_fwhm;
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / a.srf_step)) + 1;
        std::vector<double> tab(n);
        std::vector<std::vector<double>> cols(spec.size(), std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            tab[i] = std::round(lo) + a.srf_step * static_cast<double>(i);
            for (std::size_t k = 0; k < spec.size(); ++k) {
                const double x = (tab[i] - centers[k]) / a.srf_fwhm;
                const double v = std::exp(-4.0 * std::log(2.0) * x * x);
                cols[k][i] = std::abs(x) <= 2.0 ? v : 0.0;
            }
        }
        const SrfTable table(std::move(tab), spec.names(), std::move(cols));
        const std::string path = a.output.empty() ? "srf.csv" : a.output;
        spit(path, serialize_srf_table(table));
        manifest.output(path);
        manifest.write_next_to(path);
        out << "wrote " << path << ": " << table.grid().size() << " rows x " << table.band_count()
            << " bands\n";
    } else if (generator == "attenuation") {
        const auto grid = make_grid(a.grid);
        const auto spec = parse_sensor_spec(slurp(a.sensor));
        const auto table = parse_srf_table(slurp(a.srf), spec);
        if (!a.center) fail(ErrorCode::Usage, "attenuation requires --center (a band centre)");
        a.feature.center_nm = *a.center;
        const auto report = attenuation_experiment(grid, table, spec, a.feature);
        const auto json = to_json(report);
        if (!a.output.empty()) {
            manifest.input(a.sensor);
            manifest.input(a.srf);
            spit(a.output, json);
            manifest.output(a.output);
            manifest.write_next_to(a.output);
        }
        out << json;
    } else {
        fail(ErrorCode::Usage, "unknown generator '" + generator + "'");
    }
    return kExitOk;
}

// ---------------------------------------------------------------- inspect

Json describe_cube(const HyperCube& cube) {
    Json doc;
    doc["kind"] = "cube";
    doc["h"] = cube.height();
    doc["w"] = cube.width();
    doc["c"] = cube.bands();
    doc["wavelength_min_nm"] = *std::min_element(cube.wavelengths().begin(), cube.wavelengths().end());
    doc["wavelength_max_nm"] = *std::max_element(cube.wavelengths().begin(), cube.wavelengths().end());
    const std::size_t c = cube.bands();
    std::vector<double> lo(c, std::numeric_limits<double>::infinity());
    std::vector<double> hi(c, -std::numeric_limits<double>::infinity());
    std::vector<double> sum(c, 0.0);
    std::vector<std::size_t> nonfinite(c, 0);
    const auto data = cube.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t b = i % c;
        const double v = data[i];
        if (!std::isfinite(v)) {
            ++nonfinite[b];
            continue;
        }
        lo[b] = std::min(lo[b], v);
        hi[b] = std::max(hi[b], v);
        sum[b] += v;
    }
    double all_lo = std::numeric_limits<double>::infinity();
    double all_hi = -all_lo;
    std::size_t all_nonfinite = 0;
    Json bands = Json::array();
    for (std::size_t b = 0; b < c; ++b) {
        const auto finite = cube.pixel_count() - nonfinite[b];
        Json band;
        band["wavelength_nm"] = cube.wavelengths()[b];
        band["min"] = finite ? Json(lo[b]) : Json(nullptr);
        band["max"] = finite ? Json(hi[b]) : Json(nullptr);
        band["mean"] = finite ? Json(sum[b] / static_cast<double>(finite)) : Json(nullptr);
        bands.push_back(band);
        all_lo = std::min(all_lo, lo[b]);
        all_hi = std::max(all_hi, hi[b]);
        all_nonfinite += nonfinite[b];
    }
    doc["min"] = std::isfinite(all_lo) ? Json(all_lo) : Json(nullptr);
    doc["max"] = std::isfinite(all_hi) ? Json(all_hi) : Json(nullptr);
    doc["non_finite"] = all_nonfinite;
    doc["bands"] = bands;
    return doc;
}

Json describe_mask(const LabelMask& mask) {
    Json doc;
    doc["kind"] = "mask";
    doc["h"] = mask.height();
    doc["w"] = mask.width();
    doc["ignore_value"] = mask.ignore_value();
    std::map<int, std::size_t> counts;
    std::size_t ignored = 0;
    for (auto v : mask.labels()) {
        if (v == mask.ignore_value())
            ++ignored;
        else
            ++counts[v];
    }
    doc["ignored_pixels"] = ignored;
    doc["ignored_fraction"] = static_cast<double>(ignored) / static_cast<double>(mask.labels().size());
    Json labels = Json::object();
    for (const auto& [label, n] : counts) labels[std::to_string(label)] = n;
    doc["label_counts"] = labels;
    return doc;
}

Json describe_weights(const WeightMatrix& w) {
    Json doc;
    doc["kind"] = "weights";
    doc["rows"] = w.rows();
    doc["cols"] = w.cols();
    doc["source_grid_hash"] = w.source_grid_hash();
    Json bands = Json::array();
    for (const auto& s : weight_summary(w)) {
        Json b;
        b["name"] = s.name;
        b["support_count"] = s.support_count;
        b["column_sum"] = s.column_sum;
        b["effective_width_bands"] = s.effective_width_bands;
        b["effective_width_nm"] = s.effective_width_nm;
        b["weighted_mean_wavelength_nm"] = s.weighted_mean_wavelength_nm;
        bands.push_back(b);
    }
    doc["bands"] = bands;
    return doc;
}

struct InspectArgs {
    std::string path;
    std::string sensor;
    std::string srf;
    std::string save;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
    const std::string bytes = slurp(a.path);
    const std::string_view head(bytes.data(), std::min<std::size_t>(bytes.size(), 64));
    Json doc;
    if (!a.sensor.empty()) {
        // Build a plan or weight matrix for this cube's grid.
        CubeReadOptions opts;
        opts.allow_non_finite = true;
        const auto cube = decode_cube(bytes, opts);
        const auto spec = parse_sensor_spec(slurp(a.sensor));
        const auto grid = grid_of(cube);
        if (a.srf.empty()) {
            const auto plan = nearest_band_indices(grid, spec);
            const auto text = serialize_plan(plan);
            if (!a.save.empty()) spit(a.save, text);
            doc = Json::parse(text);
            doc["kind"] = "plan";
        } else {
            const auto weights = build_weight_matrix(grid, parse_srf_table(slurp(a.srf), spec), spec);
            if (!a.save.empty()) spit(a.save, serialize_weights_csv(weights));
            doc = describe_weights(weights);
        }
    } else if (head.starts_with("HSC")) {
        CubeReadOptions opts;
        opts.allow_non_finite = true;
        opts.allow_unordered_bands = true;
        doc = describe_cube(decode_cube(bytes, opts));
    } else if (head.starts_with("HSM")) {
        doc = describe_mask(decode_mask(bytes));
    } else if (head.starts_with("band_index")) {
        doc = describe_weights(parse_weights_csv(bytes));
    } else if (head.find('{') != std::string_view::npos) {
        auto plan = parse_plan(bytes);
        doc = Json::parse(serialize_plan(plan));
        doc["kind"] = "plan";
    } else {
        fail(ErrorCode::Parse, "'" + a.path + "' is not a cube, mask, plan or weights file");
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adapt hyperspectral cubes to multispectral sensors and score results", "hsadapt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", HSADAPT_VERSION);

    int status = kExitOk;
    std::function<int()> action;

    std::size_t threads_default = 1;
    try {
        threads_default = default_threads();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    AdaptArgs adapt;
    adapt.threads = threads_default;
    auto* adapt_cmd = app.add_subcommand("adapt", "Project a cube onto a target sensor's bands");
    adapt_cmd->add_option("--method", adapt.method, "naive | srf")
        ->required()
        ->check(CLI::IsMember({"naive", "srf"}));
    adapt_cmd->add_option("--sensor", adapt.sensor, "Sensor spec JSON")->required();
    adapt_cmd->add_option("--input", adapt.input, "Input HSC-v1 cube")->required();
    adapt_cmd->add_option("--output", adapt.output, "Output HSC-v1 cube")->required();
    adapt_cmd->add_option("--srf", adapt.srf, "SRF table CSV (required for --method srf)");
    adapt_cmd->add_option("--threads", adapt.threads, "Worker threads (default $HSADAPT_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    adapt_cmd->add_option("--tile", adapt.tile, "Tile edge in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    adapt_cmd->add_flag("--allow-nan", adapt.allow_nan, "Accept non-finite input values");
    adapt_cmd->add_option("--save-plan", adapt.save_plan, "Write the selection plan JSON");
    adapt_cmd->add_option("--save-weights", adapt.save_weights, "Write the weight matrix CSV");
    adapt_cmd->callback([&] { action = [&] { return cmd_adapt(adapt, out); }; });

    auto* metrics_cmd = app.add_subcommand("metrics", "Score segmentation or regression outputs");
    metrics_cmd->require_subcommand(1);

    SegArgs seg;
    seg.threads = threads_default;
    auto* seg_cmd = metrics_cmd->add_subcommand("seg", "Pooled mIoU over paired HSM-v1 masks");
    seg_cmd->add_option("--pred-dir", seg.pred_dir, "Directory of predicted masks")->required();
    seg_cmd->add_option("--truth-dir", seg.truth_dir, "Directory of truth masks")->required();
    seg_cmd->add_option("--classes", seg.classes, "Number of classes")->required()->check(CLI::PositiveNumber);
    seg_cmd->add_option("--ignore", seg.ignore, "Ignore label in truth masks")->capture_default_str();
    seg_cmd->add_flag("--per-chip", seg.per_chip, "Also report the mean of per-chip mIoU");
    seg_cmd->add_option("--threads", seg.threads, "Worker threads")->check(CLI::PositiveNumber);
    seg_cmd->add_option("--out", seg.report.out_path, "Write JSON report here, text to stdout");
    seg_cmd->add_flag("--text", seg.report.text, "Print the human-readable report");
    seg_cmd->callback([&] { action = [&] { return cmd_metrics_seg(seg, out); }; });

    RegArgs reg;
    auto* reg_cmd = metrics_cmd->add_subcommand("reg", "Normalised MSE against a mean predictor");
    reg_cmd->add_option("--pred", reg.pred, "Predictions CSV")->required();
    reg_cmd->add_option("--truth", reg.truth, "Truth CSV")->required();
    reg_cmd->add_option("--train", reg.train, "Training targets CSV (baseline)")->required();
    reg_cmd->add_option("--out", reg.report.out_path, "Write JSON report here, text to stdout");
    reg_cmd->add_flag("--text", reg.report.text, "Print the human-readable report");
    reg_cmd->callback([&] { action = [&] { return cmd_metrics_reg(reg, out); }; });

    SynthArgs synth;
    std::string generator;
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic fixtures");
    synth_cmd->set_help_flag("--help", "Print this help message and exit");
    synth_cmd->add_option("generator", generator, "flat | absorption | random | srf | attenuation")
        ->required()
        ->check(CLI::IsMember({"flat", "absorption", "random", "srf", "attenuation"}));
    add_grid_options(synth_cmd, synth.grid);
    synth_cmd->add_option("--h", synth.h, "Height in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    synth_cmd->add_option("--w", synth.w, "Width in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    synth_cmd->add_option("--value", synth.value, "Value of the flat cube")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--continuum", synth.feature.continuum, "Absorption continuum")->capture_default_str();
    synth_cmd->add_option("--depth", synth.feature.depth, "Absorption depth")->capture_default_str();
    synth_cmd->add_option("--fwhm", synth.feature.fwhm_nm, "Absorption FWHM (nm)")->capture_default_str();
    synth_cmd->add_option("--center", synth.center, "Absorption centre (nm)");
    synth_cmd->add_option("--sensor", synth.sensor, "Sensor spec JSON (srf, attenuation)");
    synth_cmd->add_option("--srf", synth.srf, "SRF table CSV (attenuation)");
    synth_cmd->add_option("--srf-fwhm", synth.srf_fwhm, "Gaussian SRF FWHM (nm) for 'srf'")->capture_default_str();
    synth_cmd->add_option("--srf-step", synth.srf_step, "SRF tabulation step (nm) for 'srf'")->capture_default_str();
    synth_cmd->add_option("-o,--output", synth.output, "Output path (default <generator>.hsc)");
    synth_cmd->callback([&] {
        if ((generator == "srf" || generator == "attenuation") && synth.sensor.empty())
            throw CLI::ValidationError("--sensor", "required for generator '" + generator + "'");
        if (generator == "attenuation" && synth.srf.empty())
            throw CLI::ValidationError("--srf", "required for generator 'attenuation'");
        action = [&] { return cmd_synth(generator, synth, out); };
    });

    InspectArgs inspect;
    auto* inspect_cmd = app.add_subcommand("inspect", "Summarise a cube, mask, plan or weights file");
    inspect_cmd->add_option("path", inspect.path, "File to inspect")->required();
    inspect_cmd->add_option("--sensor", inspect.sensor, "Build a plan (or weights with --srf) for the cube's grid");
    inspect_cmd->add_option("--srf", inspect.srf, "SRF table CSV");
    inspect_cmd->add_option("--save", inspect.save, "Write the built plan JSON / weights CSV");
    inspect_cmd->callback([&] {
        if (!inspect.srf.empty() && inspect.sensor.empty())
            throw CLI::ValidationError("--srf", "requires --sensor");
        action = [&] { return cmd_inspect(inspect, out); };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        status = action ? action() : kExitUsage;
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return e.code() == ErrorCode::Usage ? kExitUsage : kExitDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return status;
}

} // namespace hsadapt::cli

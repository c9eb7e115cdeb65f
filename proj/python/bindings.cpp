#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "hsadapt/band_select.hpp"
#include "hsadapt/cube_io.hpp"
#include "hsadapt/digest.hpp"
#include "hsadapt/error.hpp"
#include "hsadapt/metrics.hpp"
#include "hsadapt/srf_resample.hpp"
#include "hsadapt/synth_lab.hpp"

namespace py = pybind11;
using namespace hsadapt;

namespace {

using CubeArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<std::int16_t, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
    return {a.data(), a.data() + a.size()};
}

HyperCube to_cube(const CubeArray& data, const DoubleArray& wavelengths) {
    if (data.ndim() != 3) throw py::value_error("cube must be a (height, width, bands) array");
    std::vector<float> values(data.data(), data.data() + data.size());
    return HyperCube(static_cast<std::size_t>(data.shape(0)), static_cast<std::size_t>(data.shape(1)),
                     to_vector(wavelengths), std::move(values));
}

py::array_t<float> from_cube(const HyperCube& cube) {
    py::array_t<float> out({cube.height(), cube.width(), cube.bands()});
    std::memcpy(out.mutable_data(), cube.data().data(), cube.data().size() * sizeof(float));
    return out;
}

py::array_t<double> from_vector(std::span<const double> v) {
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

LabelMask to_mask(const LabelArray& a, std::int16_t ignore) {
    if (a.ndim() != 2) throw py::value_error("mask must be a 2-D array");
    return LabelMask(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                     {a.data(), a.data() + a.size()}, ignore);
}

TargetTable to_table(const DoubleArray& a, const std::vector<std::string>& names) {
    if (a.ndim() != 2) throw py::value_error("expected a (samples, parameters) array");
    TargetTable t;
    t.parameter_names = names;
    if (t.parameter_names.empty())
        for (py::ssize_t c = 0; c < a.shape(1); ++c) t.parameter_names.push_back("p" + std::to_string(c));
    if (static_cast<py::ssize_t>(t.parameter_names.size()) != a.shape(1))
        throw py::value_error("parameter_names length does not match the column count");
    for (py::ssize_t r = 0; r < a.shape(0); ++r) t.sample_ids.push_back(std::to_string(r));
    t.values.assign(a.data(), a.data() + a.size());
    return t;
}

py::dict seg_dict(const SegReport& r) {
    py::dict d;
    d["miou"] = r.miou;
    d["present_classes"] = r.present_classes;
    py::list per;
    for (const auto& v : r.per_class_iou) per.append(v ? py::cast(*v) : py::none());
    d["per_class_iou"] = per;
    return d;
}

} // namespace

PYBIND11_MODULE(_hsadapt, m) {
    m.doc() = "Hyperspectral to multispectral band adaptation";
    m.attr("__version__") = HSADAPT_VERSION;

    static py::exception<hsadapt::Error> error_type(m, "HsadaptError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const hsadapt::Error& e) {
            py::object inst = py::handle(error_type.ptr())(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    m.def("grid_hash", [](const DoubleArray& w) { return grid_hash(to_vector(w)); }, py::arg("wavelengths"));

    py::class_<SensorSpec>(m, "SensorSpec")
        .def(py::init([](std::string name, const std::vector<std::pair<std::string, double>>& bands) {
                 std::vector<TargetBand> v;
                 for (const auto& [n, c] : bands) v.push_back({n, c});
                 return SensorSpec(std::move(name), std::move(v));
             }),
             py::arg("name"), py::arg("bands"))
        .def_property_readonly("name", &SensorSpec::sensor_name)
        .def_property_readonly("names", &SensorSpec::names)
        .def_property_readonly("centers", [](const SensorSpec& s) { return from_vector(s.centers()); })
        .def("__len__", &SensorSpec::size)
        .def("to_json", &serialize_sensor_spec);
    m.def("parse_sensor_spec", &parse_sensor_spec, py::arg("text"));

    py::class_<SrfTable>(m, "SrfTable")
        .def(py::init([](const DoubleArray& grid, std::vector<std::string> names, const DoubleArray& cols) {
                 if (cols.ndim() != 2) throw py::value_error("columns must be (bands, samples)");
                 std::vector<std::vector<double>> c;
                 for (py::ssize_t k = 0; k < cols.shape(0); ++k)
                     c.emplace_back(cols.data() + k * cols.shape(1), cols.data() + (k + 1) * cols.shape(1));
                 return SrfTable(to_vector(grid), std::move(names), std::move(c));
             }),
             py::arg("wavelengths"), py::arg("band_names"), py::arg("columns"))
        .def_property_readonly("wavelengths", [](const SrfTable& t) { return from_vector(t.grid()); })
        .def_property_readonly("band_names", [](const SrfTable& t) {
            return std::vector<std::string>(t.band_names().begin(), t.band_names().end());
        })
        .def("column", [](const SrfTable& t, std::size_t k) { return from_vector(t.column(k)); })
        .def("evaluate", &srf_evaluate, py::arg("band_index"), py::arg("wavelength_nm"))
        .def("to_csv", &serialize_srf_table);
    m.def("parse_srf_table", &parse_srf_table, py::arg("text"), py::arg("spec"));

    py::class_<SelectionPlan>(m, "SelectionPlan")
        .def_readonly("indices", &SelectionPlan::indices)
        .def_readonly("distances_nm", &SelectionPlan::distances_nm)
        .def_readonly("selected_wavelengths_nm", &SelectionPlan::selected_wavelengths_nm)
        .def_readonly("band_names", &SelectionPlan::band_names)
        .def_readonly("source_grid_hash", &SelectionPlan::source_grid_hash)
        .def("repeated_targets", &SelectionPlan::repeated_targets)
        .def("to_json", &serialize_plan);
    m.def("parse_plan", &parse_plan, py::arg("text"));
    m.def("nearest_band_indices",
          [](const DoubleArray& w, const SensorSpec& spec) { return nearest_band_indices(WavelengthGrid(to_vector(w)), spec); },
          py::arg("wavelengths"), py::arg("spec"));
    m.def("select_bands",
          [](const CubeArray& data, const DoubleArray& w, const SelectionPlan& plan) {
              return from_cube(apply_selection(to_cube(data, w), plan));
          },
          py::arg("cube"), py::arg("wavelengths"), py::arg("plan"));

    py::class_<WeightMatrix>(m, "WeightMatrix")
        .def_property_readonly("shape", [](const WeightMatrix& w) { return py::make_tuple(w.rows(), w.cols()); })
        .def_property_readonly("weights", [](const WeightMatrix& w) {
            py::array_t<double> out({w.rows(), w.cols()});
            std::copy(w.weights().begin(), w.weights().end(), out.mutable_data());
            return out;
        })
        .def_property_readonly("support_counts", [](const WeightMatrix& w) {
            return std::vector<std::size_t>(w.support_counts().begin(), w.support_counts().end());
        })
        .def_property_readonly("band_names", [](const WeightMatrix& w) {
            return std::vector<std::string>(w.band_names().begin(), w.band_names().end());
        })
        .def_property_readonly("target_centers", [](const WeightMatrix& w) { return from_vector(w.target_centers()); })
        .def_property_readonly("source_grid_hash", &WeightMatrix::source_grid_hash)
        .def("summary", [](const WeightMatrix& w) {
            py::list out;
            for (const auto& s : weight_summary(w)) {
                py::dict d;
                d["name"] = s.name;
                d["support_count"] = s.support_count;
                d["effective_width_bands"] = s.effective_width_bands;
                d["effective_width_nm"] = s.effective_width_nm;
                d["weighted_mean_wavelength_nm"] = s.weighted_mean_wavelength_nm;
                d["column_sum"] = s.column_sum;
                out.append(d);
            }
            return out;
        })
        .def("to_csv", &serialize_weights_csv);
    m.def("build_weight_matrix",
          [](const DoubleArray& w, const SrfTable& table, const SensorSpec& spec) {
              return build_weight_matrix(WavelengthGrid(to_vector(w)), table, spec);
          },
          py::arg("wavelengths"), py::arg("table"), py::arg("spec"));
    m.def("parse_weights_csv",
          [](const std::string& text, const SensorSpec* spec) { return parse_weights_csv(text, spec); },
          py::arg("text"), py::arg("spec") = nullptr);
    m.def("resample",
          [](const CubeArray& data, const DoubleArray& w, const WeightMatrix& weights, std::size_t tile_size,
             std::size_t threads, bool allow_non_finite) {
              const auto cube = to_cube(data, w);
              HyperCube out;
              {
                  py::gil_scoped_release release;
                  out = resample_cube(cube, weights, {tile_size, threads, allow_non_finite});
              }
              return from_cube(out);
          },
          py::arg("cube"), py::arg("wavelengths"), py::arg("weights"), py::arg("tile_size") = 64,
          py::arg("threads") = 1, py::arg("allow_non_finite") = false);

    py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
        .def(py::init<std::size_t>(), py::arg("n_classes"))
        .def_property_readonly("classes", &ConfusionMatrix::classes)
        .def_property_readonly("counts", [](const ConfusionMatrix& c) {
            py::array_t<std::int64_t> out({c.classes(), c.classes()});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t t = 0; t < c.classes(); ++t)
                for (std::size_t p = 0; p < c.classes(); ++p) v(t, p) = c.count(t, p);
            return out;
        })
        .def_property_readonly("ignored_pixels", &ConfusionMatrix::ignored_pixels)
        .def_property_readonly("counted_pixels", &ConfusionMatrix::counted_pixels)
        .def("accumulate",
             [](ConfusionMatrix& c, const LabelArray& pred, const LabelArray& truth, std::int16_t ignore) {
                 c.accumulate(to_mask(pred, ignore), to_mask(truth, ignore), ignore);
             },
             py::arg("pred"), py::arg("truth"), py::arg("ignore_value") = -1)
        .def("merge", &ConfusionMatrix::merge)
        .def("miou", [](const ConfusionMatrix& c) { return seg_dict(miou(c)); });
    m.def("confusion",
          [](const LabelArray& pred, const LabelArray& truth, std::size_t n, std::int16_t ignore) {
              return accumulate_confusion(to_mask(pred, ignore), to_mask(truth, ignore), n, ignore, ConfusionMatrix(n));
          },
          py::arg("pred"), py::arg("truth"), py::arg("n_classes"), py::arg("ignore_value") = -1);
    m.def("miou", [](const ConfusionMatrix& c) { return seg_dict(miou(c)); }, py::arg("confusion"));

    m.def("nmse",
          [](const DoubleArray& pred, const DoubleArray& truth, const DoubleArray& train,
             std::vector<std::string> names) {
              const auto r = score_regression(to_table(pred, names), to_table(truth, names), to_table(train, names));
              py::dict d;
              d["nmse"] = r.nmse;
              d["parameter_names"] = r.parameter_names;
              d["per_param_mse"] = r.per_param_mse;
              d["baseline_mse"] = r.baseline_mse;
              return d;
          },
          py::arg("pred"), py::arg("truth"), py::arg("train"), py::arg("parameter_names") = std::vector<std::string>{});

    m.def("read_cube",
          [](const std::string& path, bool allow_non_finite, bool allow_unordered_bands) {
              const auto c = read_cube_file(path, {allow_non_finite, allow_unordered_bands});
              return py::make_tuple(from_cube(c), from_vector(c.wavelengths()));
          },
          py::arg("path"), py::arg("allow_non_finite") = false, py::arg("allow_unordered_bands") = false);
    m.def("write_cube",
          [](const std::string& path, const CubeArray& data, const DoubleArray& w) {
              write_cube_file(path, to_cube(data, w));
          },
          py::arg("path"), py::arg("cube"), py::arg("wavelengths"));
    m.def("read_mask",
          [](const std::string& path) {
              const auto mask = read_mask_file(path);
              py::array_t<std::int16_t> out({mask.height(), mask.width()});
              std::copy(mask.labels().begin(), mask.labels().end(), out.mutable_data());
              return py::make_tuple(out, mask.ignore_value());
          },
          py::arg("path"));
    m.def("write_mask",
          [](const std::string& path, const LabelArray& labels, std::int16_t ignore) {
              write_mask_file(path, to_mask(labels, ignore));
          },
          py::arg("path"), py::arg("labels"), py::arg("ignore_value") = -1);

    m.def("gen_flat_cube",
          [](std::size_t h, std::size_t w, const DoubleArray& grid, float value) {
              return from_cube(gen_flat_cube(h, w, WavelengthGrid(to_vector(grid)), value));
          },
          py::arg("h"), py::arg("w"), py::arg("wavelengths"), py::arg("value"));
    m.def("gen_absorption_cube",
          [](std::size_t h, std::size_t w, const DoubleArray& grid, double continuum, double center_nm, double depth,
             double fwhm_nm) {
              return from_cube(gen_absorption_cube(h, w, WavelengthGrid(to_vector(grid)),
                                                   {continuum, center_nm, depth, fwhm_nm}));
          },
          py::arg("h"), py::arg("w"), py::arg("wavelengths"), py::arg("continuum"), py::arg("center_nm"),
          py::arg("depth"), py::arg("fwhm_nm"));
    m.def("gen_random_cube",
          [](std::size_t h, std::size_t w, const DoubleArray& grid, std::uint64_t seed) {
              return from_cube(gen_random_cube(h, w, WavelengthGrid(to_vector(grid)), seed));
          },
          py::arg("h"), py::arg("w"), py::arg("wavelengths"), py::arg("seed"));
    m.def("attenuation_experiment",
          [](const DoubleArray& grid, const SrfTable& table, const SensorSpec& spec, double continuum,
             double center_nm, double depth, double fwhm_nm) {
              const auto r = attenuation_experiment(WavelengthGrid(to_vector(grid)), table, spec,
                                                    {continuum, center_nm, depth, fwhm_nm});
              py::dict d;
              d["band_index"] = r.band_index;
              d["band_name"] = r.band_name;
              d["d_naive"] = r.d_naive;
              d["d_srf"] = r.d_srf;
              d["retention_naive"] = r.retention_naive;
              d["retention_srf"] = r.retention_srf;
              d["srf_effective_width_nm"] = r.srf_effective_width_nm;
              d["attenuation_expected"] = r.attenuation_expected;
              d["attenuated"] = r.attenuated;
              return d;
          },
          py::arg("wavelengths"), py::arg("table"), py::arg("spec"), py::arg("continuum"), py::arg("center_nm"),
          py::arg("depth"), py::arg("fwhm_nm"));
}

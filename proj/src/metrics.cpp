#include "hsadapt/metrics.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "hsadapt/error.hpp"

namespace hsadapt {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes)
    : n_(n_classes), counts_(n_classes * n_classes, 0), unpredicted_(n_classes, 0) {
    if (n_classes == 0) fail(ErrorCode::InvalidValue, "number of classes must be positive");
}

std::int64_t ConfusionMatrix::counted_pixels() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}) +
           std::accumulate(unpredicted_.begin(), unpredicted_.end(), std::int64_t{0});
}

void ConfusionMatrix::accumulate(const LabelMask& pred, const LabelMask& truth,
                                 std::int16_t ignore_value) {
    if (pred.height() != truth.height() || pred.width() != truth.width())
        fail(ErrorCode::ShapeMismatch, "prediction mask is " + std::to_string(pred.height()) + "x" +
                                           std::to_string(pred.width()) + ", truth is " +
                                           std::to_string(truth.height()) + "x" +
                                           std::to_string(truth.width()));
    const auto n = static_cast<std::int64_t>(n_);
    auto check = [&](std::int16_t v, const char* which) {
        if (v != ignore_value && (v < 0 || v >= n))
            fail(ErrorCode::IndexOutOfRange, std::string(which) + " label " + std::to_string(v) +
                                                 " outside [0, " + std::to_string(n) +
                                                 ") and not the ignore value " +
                                                 std::to_string(ignore_value));
    };
    const auto p = pred.labels();
    const auto t = truth.labels();
    for (std::size_t i = 0; i < t.size(); ++i) {
        check(p[i], "prediction");
        check(t[i], "truth");
    }
    // Validation first so a bad mask leaves the accumulator untouched.
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == ignore_value) {
            ++ignored_;
        } else if (p[i] == ignore_value) {
            ++unpredicted_[static_cast<std::size_t>(t[i])];
        } else {
            ++counts_[static_cast<std::size_t>(t[i]) * n_ + static_cast<std::size_t>(p[i])];
        }
    }
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.n_ != n_)
        fail(ErrorCode::ShapeMismatch, "cannot merge confusion matrices with different class counts");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    for (std::size_t i = 0; i < n_; ++i) unpredicted_[i] += other.unpredicted_[i];
    ignored_ += other.ignored_;
}

ConfusionMatrix accumulate_confusion(const LabelMask& pred, const LabelMask& truth,
                                     std::size_t n_classes, std::int16_t ignore_value,
                                     ConfusionMatrix acc) {
    if (acc.classes() != n_classes)
        fail(ErrorCode::ShapeMismatch, "accumulator class count differs from n_classes");
    acc.accumulate(pred, truth, ignore_value);
    return acc;
}

SegReport miou(const ConfusionMatrix& acc) {
    const std::size_t n = acc.classes();
    SegReport report;
    report.per_class_iou.resize(n);
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::int64_t row = acc.unpredicted(c), col = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row += acc.count(c, j);
            col += acc.count(j, c);
        }
        const std::int64_t tp = acc.count(c, c);
        const std::int64_t uni = row + col - tp;
        if (uni == 0) continue;
        const double iou = static_cast<double>(tp) / static_cast<double>(uni);
        report.per_class_iou[c] = iou;
        sum += iou;
        ++report.present_classes;
    }
    if (report.present_classes == 0)
        fail(ErrorCode::NoUnion, "mIoU undefined: every class has zero union");
    report.miou = sum / static_cast<double>(report.present_classes);
    return report;
}

double mean_per_chip_miou(std::span<const ConfusionMatrix> chips) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& chip : chips) {
        try {
            sum += miou(chip).miou;
            ++used;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoUnion) throw;
        }
    }
    if (used == 0) fail(ErrorCode::NoUnion, "mIoU undefined: no chip has a class with non-zero union");
    return sum / static_cast<double>(used);
}

std::vector<double> baseline_mse(std::span<const double> train, std::size_t cols) {
    if (cols == 0 || train.size() % cols != 0)
        fail(ErrorCode::ShapeMismatch, "training table is not rectangular");
    const std::size_t rows = train.size() / cols;
    if (rows < 2) fail(ErrorCode::EmptyTable, "baseline needs at least two training samples");
    std::vector<double> out(cols);
    for (std::size_t i = 0; i < cols; ++i) {
        double mean = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = train[r * cols + i];
            if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "non-finite training target");
            mean += v;
        }
        mean /= static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = train[r * cols + i] - mean;
            ss += d * d;
        }
        out[i] = ss / static_cast<double>(rows);
        if (!(out[i] > 0.0))
            fail(ErrorCode::DegenerateBaseline, "training target column " + std::to_string(i) +
                                                    " has zero variance; normalised MSE is undefined");
    }
    return out;
}

RegReport nmse(std::span<const double> pred, std::span<const double> truth, std::size_t cols,
               std::span<const double> baseline) {
    if (cols == 0 || pred.size() != truth.size() || pred.size() % cols != 0 ||
        baseline.size() != cols)
        fail(ErrorCode::ShapeMismatch, "prediction, truth and baseline shapes disagree");
    const std::size_t rows = pred.size() / cols;
    if (rows == 0) fail(ErrorCode::EmptyTable, "no samples to score");
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (!std::isfinite(pred[i]) || !std::isfinite(truth[i]))
            fail(ErrorCode::NonFinite, "non-finite value in predictions or truth");
    for (double b : baseline)
        if (!(b > 0.0) || !std::isfinite(b))
            fail(ErrorCode::DegenerateBaseline, "baseline MSE entries must be finite and > 0");

    RegReport report;
    report.baseline_mse.assign(baseline.begin(), baseline.end());
    report.per_param_mse.assign(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < cols; ++i) {
            const double d = pred[r * cols + i] - truth[r * cols + i];
            report.per_param_mse[i] += d * d;
        }
    for (std::size_t i = 0; i < cols; ++i) {
        report.per_param_mse[i] /= static_cast<double>(rows);
        report.nmse += report.per_param_mse[i] / baseline[i];
    }
    return report;
}

RegReport score_regression(const TargetTable& pred, const TargetTable& truth,
                           const TargetTable& train) {
    const std::size_t cols = truth.cols();
    // column position of each truth parameter in the other tables
    auto column_map = [&](const TargetTable& t, const char* what) {
        std::vector<std::size_t> map;
        for (const auto& name : truth.parameter_names) {
            auto it = std::find(t.parameter_names.begin(), t.parameter_names.end(), name);
            if (it == t.parameter_names.end())
                fail(ErrorCode::MissingColumn,
                     std::string(what) + " CSV lacks parameter column '" + name + "'");
            map.push_back(static_cast<std::size_t>(it - t.parameter_names.begin()));
        }
        return map;
    };
    const auto pred_cols = column_map(pred, "prediction");
    const auto train_cols = column_map(train, "training");

    std::unordered_map<std::string, std::size_t> pred_row;
    for (std::size_t r = 0; r < pred.rows(); ++r) pred_row.emplace(pred.sample_ids[r], r);
    std::vector<std::string> missing;
    for (const auto& id : truth.sample_ids)
        if (!pred_row.count(id)) missing.push_back(id);
    if (!missing.empty() || pred.rows() != truth.rows()) {
        std::string msg = "prediction and truth sample_ids differ";
        if (!missing.empty()) {
            msg += "; missing predictions for:";
            for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " " + missing[i];
        }
        fail(ErrorCode::UnpairedFiles, msg);
    }

    std::vector<double> p(truth.rows() * cols), t(truth.values), tr(train.rows() * cols);
    for (std::size_t r = 0; r < truth.rows(); ++r) {
        const std::size_t pr = pred_row.at(truth.sample_ids[r]);
        for (std::size_t i = 0; i < cols; ++i) p[r * cols + i] = pred.at(pr, pred_cols[i]);
    }
    for (std::size_t r = 0; r < train.rows(); ++r)
        for (std::size_t i = 0; i < cols; ++i) tr[r * cols + i] = train.at(r, train_cols[i]);

    auto report = nmse(p, t, cols, baseline_mse(tr, cols));
    report.parameter_names = truth.parameter_names;
    return report;
}

std::string to_json(const SegReport& report) {
    nlohmann::ordered_json doc;
    doc["miou"] = report.miou;
    doc["present_classes"] = report.present_classes;
    auto per_class = nlohmann::ordered_json::array();
    for (const auto& iou : report.per_class_iou)
        per_class.push_back(iou ? nlohmann::ordered_json(*iou) : nlohmann::ordered_json(nullptr));
    doc["per_class_iou"] = per_class;
    return doc.dump(2) + "\n";
}

std::string to_text(const SegReport& report) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    for (std::size_t c = 0; c < report.per_class_iou.size(); ++c) {
        out << "class " << c << ": ";
        if (report.per_class_iou[c])
            out << *report.per_class_iou[c] << "\n";
        else
            out << "absent\n";
    }
    out << "mIoU: " << report.miou << " over " << report.present_classes << " classes\n";
    return out.str();
}

std::string to_json(const RegReport& report) {
    nlohmann::ordered_json doc;
    doc["nmse"] = report.nmse;
    auto params = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.per_param_mse.size(); ++i) {
        nlohmann::ordered_json p;
        p["name"] = i < report.parameter_names.size() ? report.parameter_names[i]
                                                      : "param" + std::to_string(i);
        p["mse"] = report.per_param_mse[i];
        p["baseline_mse"] = report.baseline_mse[i];
        p["ratio"] = report.per_param_mse[i] / report.baseline_mse[i];
        params.push_back(p);
    }
    doc["parameters"] = params;
    return doc.dump(2) + "\n";
}

std::string to_text(const RegReport& report) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    for (std::size_t i = 0; i < report.per_param_mse.size(); ++i) {
        const auto name = i < report.parameter_names.size() ? report.parameter_names[i]
                                                            : "param" + std::to_string(i);
        out << name << ": mse " << report.per_param_mse[i] << ", baseline "
            << report.baseline_mse[i] << ", ratio "
            << report.per_param_mse[i] / report.baseline_mse[i] << "\n";
    }
    out << "normalised MSE: " << report.nmse << "\n";
    return out.str();
}

} // namespace hsadapt

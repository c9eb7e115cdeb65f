#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsadapt/cube_io.hpp"
#include "hsadapt/hypercube.hpp"

namespace hsadapt {

/// Pixel tally for segmentation scoring. Rows are truth, columns are
/// prediction. A pixel whose truth is the ignore value is only counted in
/// `ignored_pixels`; a pixel with valid truth but an ignore-valued prediction
/// is a miss for the truth class (`unpredicted`).
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t n_classes);

    std::size_t classes() const noexcept { return n_; }
    std::int64_t count(std::size_t truth, std::size_t pred) const noexcept {
        return counts_[truth * n_ + pred];
    }
    std::int64_t unpredicted(std::size_t truth) const noexcept { return unpredicted_[truth]; }
    std::int64_t ignored_pixels() const noexcept { return ignored_; }
    std::int64_t counted_pixels() const noexcept;
    std::int64_t total_pixels() const noexcept { return counted_pixels() + ignored_; }

    void accumulate(const LabelMask& pred, const LabelMask& truth, std::int16_t ignore_value);
    /// Element-wise sum; chips scored separately can be reduced in any order.
    void merge(const ConfusionMatrix& other);

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t n_;
    std::vector<std::int64_t> counts_;
    std::vector<std::int64_t> unpredicted_;
    std::int64_t ignored_ = 0;
};

ConfusionMatrix accumulate_confusion(const LabelMask& pred, const LabelMask& truth,
                                     std::size_t n_classes, std::int16_t ignore_value,
                                     ConfusionMatrix acc);

struct SegReport {
    /// IoU per class; empty for classes with zero union.
    std::vector<std::optional<double>> per_class_iou;
    double miou = 0.0;
    std::size_t present_classes = 0;
};

/// Unweighted mean IoU over classes with non-zero union.
SegReport miou(const ConfusionMatrix& acc);

/// Macro variant: mean over chips of each chip's mIoU. Chips where every
/// union is zero are skipped.
double mean_per_chip_miou(std::span<const ConfusionMatrix> chips);

/// Population variance of each column of a rows x cols row-major table;
/// the MSE of predicting every sample with the training mean.
std::vector<double> baseline_mse(std::span<const double> train, std::size_t cols);

struct RegReport {
    std::vector<std::string> parameter_names;
    std::vector<double> per_param_mse;
    std::vector<double> baseline_mse;
    /// sum_i mse_i / baseline_i
    double nmse = 0.0;
};

RegReport nmse(std::span<const double> pred, std::span<const double> truth, std::size_t cols,
               std::span<const double> baseline);

/// Aligns `pred` to `truth` by sample_id and parameter name, computes the
/// baseline from `train` and returns the normalised MSE report.
RegReport score_regression(const TargetTable& pred, const TargetTable& truth,
                           const TargetTable& train);

std::string to_json(const SegReport& report);
std::string to_text(const SegReport& report);
std::string to_json(const RegReport& report);
std::string to_text(const RegReport& report);

} // namespace hsadapt

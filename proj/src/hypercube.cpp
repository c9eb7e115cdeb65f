#include "hsadapt/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsadapt/error.hpp"

namespace hsadapt {

HyperCube::HyperCube(std::size_t height, std::size_t width, std::vector<double> wavelengths,
                     std::vector<float> data)
    : height_(height), width_(width), wavelengths_(std::move(wavelengths)),
      data_(std::move(data)) {
    if (height_ == 0 || width_ == 0 || wavelengths_.empty())
        fail(ErrorCode::InvalidValue, "cube dimensions must be positive");
    for (double w : wavelengths_)
        if (!std::isfinite(w) || w <= 0.0)
            fail(ErrorCode::InvalidValue, "cube wavelengths must be finite and > 0");
    const std::size_t expected = height_ * width_ * wavelengths_.size();
    if (data_.size() != expected)
        fail(ErrorCode::LengthMismatch, "cube data holds " + std::to_string(data_.size()) +
                                            " values, expected " + std::to_string(expected));
}

HyperCube::HyperCube(std::size_t height, std::size_t width, std::vector<double> wavelengths)
    : HyperCube(height, width, wavelengths,
                std::vector<float>(height * width * wavelengths.size(), 0.0f)) {}

bool HyperCube::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

LabelMask::LabelMask(std::size_t height, std::size_t width, std::vector<std::int16_t> labels,
                     std::int16_t ignore_value)
    : height_(height), width_(width), ignore_value_(ignore_value), labels_(std::move(labels)) {
    if (height_ == 0 || width_ == 0)
        fail(ErrorCode::InvalidValue, "mask dimensions must be positive");
    if (labels_.size() != height_ * width_)
        fail(ErrorCode::LengthMismatch, "mask holds " + std::to_string(labels_.size()) +
                                            " labels, expected " +
                                            std::to_string(height_ * width_));
    for (auto v : labels_)
        if (v < 0 && v != ignore_value_)
            fail(ErrorCode::IndexOutOfRange, "mask label " + std::to_string(v) +
                                                 " is negative and not the ignore value " +
                                                 std::to_string(ignore_value_));
}

} // namespace hsadapt

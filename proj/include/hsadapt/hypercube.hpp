#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hsadapt {

/// H x W x C single-precision cube in pixel-interleaved (BIP) order: the C
/// values of a pixel are contiguous, pixels are row-major.
///
/// `wavelengths` holds one centre wavelength per band. Cubes used as
/// adaptation inputs must carry a strictly increasing list (see
/// WavelengthGrid); adapted outputs carry the target band centres in sensor
/// order, which may be unsorted.
class HyperCube {
public:
    HyperCube() = default;
    HyperCube(std::size_t height, std::size_t width, std::vector<double> wavelengths,
              std::vector<float> data);
    /// Zero-filled cube.
    HyperCube(std::size_t height, std::size_t width, std::vector<double> wavelengths);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t bands() const noexcept { return wavelengths_.size(); }
    std::size_t pixel_count() const noexcept { return height_ * width_; }

    std::span<const double> wavelengths() const noexcept { return wavelengths_; }
    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }

    std::span<const float> pixel(std::size_t row, std::size_t col) const noexcept {
        return {data_.data() + (row * width_ + col) * bands(), bands()};
    }
    std::span<float> pixel(std::size_t row, std::size_t col) noexcept {
        return {data_.data() + (row * width_ + col) * bands(), bands()};
    }
    float at(std::size_t row, std::size_t col, std::size_t band) const noexcept {
        return data_[(row * width_ + col) * bands() + band];
    }

    bool all_finite() const noexcept;

    friend bool operator==(const HyperCube&, const HyperCube&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> wavelengths_;
    std::vector<float> data_;
};

/// H x W row-major class raster. Valid labels are >= 0; `ignore_value`
/// marks unannotated pixels.
class LabelMask {
public:
    LabelMask() = default;
    LabelMask(std::size_t height, std::size_t width, std::vector<std::int16_t> labels,
              std::int16_t ignore_value = -1);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::int16_t ignore_value() const noexcept { return ignore_value_; }
    std::span<const std::int16_t> labels() const noexcept { return labels_; }
    std::int16_t at(std::size_t row, std::size_t col) const noexcept {
        return labels_[row * width_ + col];
    }

    friend bool operator==(const LabelMask&, const LabelMask&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::int16_t ignore_value_ = -1;
    std::vector<std::int16_t> labels_;
};

} // namespace hsadapt

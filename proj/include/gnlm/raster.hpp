#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gnlm/error.hpp"

namespace gnlm {

/// Pixel position, x = column, y = row.
struct PixelCoord {
    std::size_t x = 0;
    std::size_t y = 0;

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Dense row-major single-band raster.
template <typename T>
class Raster {
  public:
    using value_type = T;

    Raster() = default;
    Raster(std::size_t width, std::size_t height, T fill = T{})
        : width_(width), height_(height), data_(width * height, fill) {}
    Raster(std::size_t width, std::size_t height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != width_ * height_)
            throw DataError("raster payload has " + std::to_string(data_.size()) +
                            " values, expected " + std::to_string(width_ * height_));
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
    const T& operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> row(std::size_t y) noexcept { return {data_.data() + y * width_, width_}; }
    std::span<const T> row(std::size_t y) const noexcept { return {data_.data() + y * width_, width_}; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    std::vector<T>& storage() noexcept { return data_; }
    const std::vector<T>& storage() const noexcept { return data_; }

    bool same_shape(std::size_t w, std::size_t h) const noexcept { return width_ == w && height_ == h; }
    template <typename U>
    bool same_shape(const Raster<U>& other) const noexcept {
        return same_shape(other.width(), other.height());
    }

    friend bool operator==(const Raster&, const Raster&) = default;

  private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<T> data_;
};

/// Single-channel SAR intensity image (linear power, not amplitude) with its
/// nominal number of looks.
struct SarImage {
    Raster<double> intensity;
    double looks = 1.0;

    SarImage() = default;
    SarImage(Raster<double> pixels, double nominal_looks)
        : intensity(std::move(pixels)), looks(nominal_looks) {
        validate();
    }

    std::size_t width() const noexcept { return intensity.width(); }
    std::size_t height() const noexcept { return intensity.height(); }

    void validate() const {
        if (intensity.empty())
            throw DataError("SAR image is empty");
        if (!(looks > 0.0) || !std::isfinite(looks))
            throw DataError("SAR image must have a positive, finite number of looks");
        for (double v : intensity.values())
            if (!(v >= 0.0) || !std::isfinite(v))
                throw DataError("SAR intensities must be finite and nonnegative");
    }
};

/// M-band optical raster co-registered with a SAR image, values in [0, 1].
struct OpticalGuide {
    std::vector<Raster<double>> bands;

    OpticalGuide() = default;
    explicit OpticalGuide(std::vector<Raster<double>> planes) : bands(std::move(planes)) { validate(); }

    std::size_t band_count() const noexcept { return bands.size(); }
    std::size_t width() const noexcept { return bands.empty() ? 0 : bands.front().width(); }
    std::size_t height() const noexcept { return bands.empty() ? 0 : bands.front().height(); }

    void validate() const {
        if (bands.empty())
            throw DataError("optical guide needs at least one band");
        for (const auto& b : bands) {
            if (!b.same_shape(bands.front()) || b.empty())
                throw DataError("optical guide bands must share one nonempty shape");
            for (double v : b.values())
                if (!(v >= 0.0 && v <= 1.0))
                    throw DataError("optical guide values must lie in [0, 1]");
        }
    }
};

inline void require_same_shape(const SarImage& sar, const OpticalGuide& guide) {
    if (!sar.intensity.same_shape(guide.width(), guide.height()))
        throw DataError("SAR image is " + std::to_string(sar.width()) + "x" + std::to_string(sar.height()) +
                        " but guide is " + std::to_string(guide.width()) + "x" +
                        std::to_string(guide.height()));
}

template <typename T>
double mean_of(const Raster<T>& r) {
    if (r.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto& v : r.values())
        acc += static_cast<double>(v);
    return acc / static_cast<double>(r.size());
}

}  // namespace gnlm

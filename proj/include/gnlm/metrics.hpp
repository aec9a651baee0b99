#pragma once

// No-reference despeckling quality measures: equivalent number of looks over
// a homogeneous region, the original/filtered ratio image, and the ratio
// image structuredness (RIS) built on the Haralick homogeneity of the
// ratio's co-occurrence matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gnlm/error.hpp"
#include "gnlm/raster.hpp"

namespace gnlm {

struct RegionRect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t area() const noexcept { return width * height; }

    void validate(std::size_t image_width, std::size_t image_height) const {
        if (x + width > image_width || y + height > image_height)
            throw DataError("region lies outside the image");
        if (area() < 16)
            throw DataError("region must cover at least 16 pixels");
    }
};

/// (mean / std)^2 over the region, using the unbiased sample variance.
template <typename T>
double enl(const Raster<T>& image, const RegionRect& region) {
    region.validate(image.width(), image.height());
    double mean = 0.0;
    for (std::size_t y = region.y; y < region.y + region.height; ++y)
        for (std::size_t x = region.x; x < region.x + region.width; ++x)
            mean += static_cast<double>(image(x, y));
    const double n = static_cast<double>(region.area());
    mean /= n;
    double ss = 0.0;
    for (std::size_t y = region.y; y < region.y + region.height; ++y) {
        for (std::size_t x = region.x; x < region.x + region.width; ++x) {
            const double d = static_cast<double>(image(x, y)) - mean;
            ss += d * d;
        }
    }
    const double var = ss / (n - 1.0);
    if (!(var > 0.0))
        throw NumericError("ENL undefined: region has zero variance");
    return mean * mean / var;
}

struct RatioImage {
    Raster<double> values;
    double epsilon = 0.0;
};

/// r = z / max(x_hat, eps); eps defaults to 1e-8 times the filtered mean.
/// Zero observed intensities are raised to eps as well so every ratio is positive.
inline RatioImage ratio_image(const Raster<double>& original, const Raster<double>& filtered,
                              std::optional<double> epsilon = std::nullopt) {
    if (!original.same_shape(filtered))
        throw DataError("ratio image needs original and filtered rasters of equal size");
    RatioImage r;
    r.epsilon = epsilon.value_or(1e-8 * mean_of(filtered));
    if (!(r.epsilon > 0.0))
        throw NumericError("ratio image epsilon must be positive");
    r.values = Raster<double>(original.width(), original.height());
    for (std::size_t i = 0; i < original.size(); ++i) {
        const double v = std::max(original[i], r.epsilon) / std::max(filtered[i], r.epsilon);
        if (!std::isfinite(v))
            throw NumericError("ratio image has a non-finite value");
        r.values[i] = v;
    }
    return r;
}

enum class HomogeneityForm {
    /// 1 / (1 + (i - j)^2)
    standard,
    /// 1 / ((i - j)^2 - 1); undefined for |i - j| == 1, those cells are skipped.
    literal,
};

struct RisResult {
    double ris = 0.0;  // percent
    double homogeneity = 0.0;
    double baseline = 0.0;
    std::size_t levels = 0;
    double low = 0.0;   // quantization range
    double high = 0.0;
};

namespace detail {

inline double homogeneity_kernel(long diff, HomogeneityForm form) {
    const double d2 = static_cast<double>(diff * diff);
    return form == HomogeneityForm::standard ? 1.0 / (1.0 + d2) : 1.0 / (d2 - 1.0);
}

inline double percentile(std::vector<double> v, double q) {
    const std::size_t k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

}  // namespace detail

/// RIS = 100 (H - H0) / H0 from a normalized joint histogram p(i, j);
/// H0 uses the product of the marginals.
inline RisResult ris_from_joint(const std::vector<double>& joint, std::size_t levels,
                                HomogeneityForm form = HomogeneityForm::standard) {
    if (joint.size() != levels * levels || levels == 0)
        throw DataError("joint histogram must be levels x levels");
    std::vector<double> row(levels, 0.0), col(levels, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < levels; ++i)
        for (std::size_t j = 0; j < levels; ++j) {
            row[i] += joint[i * levels + j];
            col[j] += joint[i * levels + j];
            total += joint[i * levels + j];
        }
    if (!(total > 0.0))
        throw NumericError("joint histogram is empty");
    RisResult r;
    r.levels = levels;
    for (std::size_t i = 0; i < levels; ++i) {
        for (std::size_t j = 0; j < levels; ++j) {
            const long diff = static_cast<long>(i) - static_cast<long>(j);
            if (form == HomogeneityForm::literal && (diff == 1 || diff == -1))
                continue;
            const double k = detail::homogeneity_kernel(diff, form);
            r.homogeneity += joint[i * levels + j] / total * k;
            r.baseline += row[i] / total * (col[j] / total) * k;
        }
    }
    if (r.baseline == 0.0)
        throw NumericError("RIS baseline homogeneity is zero");
    r.ris = 100.0 * (r.homogeneity - r.baseline) / r.baseline;
    return r;
}

/// Quantized ratio image: equal-width bins between the 1st and 99th
/// percentiles, values outside clamped to the end bins.
inline std::vector<std::size_t> quantize_ratio(const RatioImage& ratio, std::size_t levels, double* low = nullptr,
                                               double* high = nullptr) {
    const auto& v = ratio.values.storage();
    if (v.empty())
        throw DataError("ratio image is empty");
    const double lo = detail::percentile(v, 0.01);
    const double hi = detail::percentile(v, 0.99);
    if (!(hi > lo))
        throw NumericError("degenerate ratio image: percentile range is empty");
    std::vector<std::size_t> q(v.size());
    const double scale = static_cast<double>(levels) / (hi - lo);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double b = std::floor((v[i] - lo) * scale);
        q[i] = static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(levels - 1)));
    }
    if (low)
        *low = lo;
    if (high)
        *high = hi;
    return q;
}

/// Symmetric co-occurrence histogram of horizontally and vertically adjacent
/// pixel pairs, both orderings counted, normalized to sum 1.
inline std::vector<double> cooccurrence(const std::vector<std::size_t>& quantized, std::size_t width,
                                        std::size_t height, std::size_t levels) {
    std::vector<double> joint(levels * levels, 0.0);
    double pairs = 0.0;
    auto add = [&](std::size_t a, std::size_t b) {
        joint[a * levels + b] += 1.0;
        joint[b * levels + a] += 1.0;
        pairs += 2.0;
    };
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t q = quantized[y * width + x];
            if (x + 1 < width)
                add(q, quantized[y * width + x + 1]);
            if (y + 1 < height)
                add(q, quantized[(y + 1) * width + x]);
        }
    if (pairs == 0.0)
        throw DataError("ratio image has no adjacent pixel pairs");
    for (double& p : joint)
        p /= pairs;
    return joint;
}

inline RisResult ris(const RatioImage& ratio, std::size_t levels = 64,
                     HomogeneityForm form = HomogeneityForm::standard) {
    if (levels < 8)
        throw UsageError("RIS needs at least 8 quantization levels");
    double lo = 0.0, hi = 0.0;
    const auto q = quantize_ratio(ratio, levels, &lo, &hi);
    const bool single_bin = std::all_of(q.begin(), q.end(), [&](std::size_t v) { return v == q.front(); });
    if (single_bin)
        throw NumericError("degenerate ratio image: quantization produced a single bin");
    auto r = ris_from_joint(cooccurrence(q, ratio.values.width(), ratio.values.height(), levels), levels, form);
    r.low = lo;
    r.high = hi;
    return r;
}

}  // namespace gnlm

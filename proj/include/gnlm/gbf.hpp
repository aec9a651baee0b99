#pragma once

// Pixel-wise generalized bilateral filter with an optical guide:
//
//   x(t) = sum_s w(s, t) z(s),
//   w(s, t) ~ exp{-alpha |s - t|^2 - lambda_o d_O[o(s), o(t)] - lambda_s D[z(s), z(t)]}
//
// over a square window clipped at the image border. d_O is the band-summed
// squared difference of the two guide pixels, D the log-ratio pixel distance.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "gnlm/distances.hpp"
#include "gnlm/error.hpp"
#include "gnlm/parallel.hpp"
#include "gnlm/raster.hpp"

namespace gnlm {

// Defaults maximize PSNR on a single-look simulated scene (tools/gbf_calibrate).
// Any positive lambda_s lost PSNR there: at L = 1 the pixel distance is mostly speckle.
struct GbfConfig {
    std::size_t window_side = 15;
    double alpha = 0.0;
    double lambda_o = 200.0;
    double lambda_s = 0.0;
    std::optional<double> intensity_floor;
    unsigned threads = 0;

    void validate() const {
        if (window_side == 0 || window_side % 2 == 0)
            throw UsageError("GBF window side must be a positive odd integer");
        if (!(alpha >= 0.0) || !(lambda_o >= 0.0) || !(lambda_s >= 0.0))
            throw UsageError("GBF decay parameters must be nonnegative");
        if (!(alpha > 0.0 || lambda_o > 0.0 || lambda_s > 0.0))
            throw UsageError("at least one GBF decay parameter must be positive");
        if (intensity_floor && !(*intensity_floor > 0.0))
            throw UsageError("intensity floor must be positive");
    }
};

inline Raster<double> filter_gbf(const SarImage& sar, const OpticalGuide& guide, const GbfConfig& config) {
    config.validate();
    require_same_shape(sar, guide);
    const std::size_t width = sar.width();
    const std::size_t height = sar.height();
    const Raster<double>& z = sar.intensity;

    double floor = config.intensity_floor.value_or(1e-8 * mean_of(z));
    if (!(floor > 0.0))
        floor = std::numeric_limits<double>::min();
    Raster<double> zc = z;
    for (double& v : zc.values())
        v = std::max(v, floor);

    const long half = static_cast<long>(config.window_side / 2);
    Raster<double> out(width, height, 0.0);

    // One task per row; rows are written by exactly one task.
    parallel_for(height, config.threads, [&](std::size_t y, unsigned) {
        for (std::size_t x = 0; x < width; ++x) {
            const long y_lo = std::max(0L, static_cast<long>(y) - half);
            const long y_hi = std::min(static_cast<long>(height) - 1, static_cast<long>(y) + half);
            const long x_lo = std::max(0L, static_cast<long>(x) - half);
            const long x_hi = std::min(static_cast<long>(width) - 1, static_cast<long>(x) + half);
            double num = 0.0, den = 0.0;
            for (long sy = y_lo; sy <= y_hi; ++sy) {
                for (long sx = x_lo; sx <= x_hi; ++sx) {
                    const double ddx = static_cast<double>(sx - static_cast<long>(x));
                    const double ddy = static_cast<double>(sy - static_cast<long>(y));
                    double e = -config.alpha * (ddx * ddx + ddy * ddy);
                    if (config.lambda_o > 0.0) {
                        double dop = 0.0;
                        for (const auto& b : guide.bands) {
                            const double d = b(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)) - b(x, y);
                            dop += d * d;
                        }
                        e -= config.lambda_o * dop;
                    }
                    if (config.lambda_s > 0.0)
                        e -= config.lambda_s *
                             detail::log_ratio_distance(zc(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)),
                                                        zc(x, y));
                    // The center pixel has e == 0, the largest exponent.
                    const double w = std::exp(e);
                    num += w * z(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
                    den += w;
                }
            }
            out(x, y) = num / den;
        }
    });
    return out;
}

}  // namespace gnlm

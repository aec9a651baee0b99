#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gnlm/error.hpp"
#include "gnlm/raster.hpp"

namespace gnlm {

/// Integer displacement between two pixel positions.
struct Offset {
    long dx = 0;
    long dy = 0;

    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Square patch whose anchor is its top-left pixel; the offset set is the
/// side x side grid {0..side-1}^2 in raster order.
class PatchGeometry {
  public:
    explicit PatchGeometry(std::size_t side) : side_(side) {
        if (side == 0)
            throw UsageError("patch side must be positive");
    }

    std::size_t side() const noexcept { return side_; }
    std::size_t size() const noexcept { return side_ * side_; }

    std::vector<Offset> offsets() const {
        std::vector<Offset> out;
        out.reserve(size());
        for (std::size_t y = 0; y < side_; ++y)
            for (std::size_t x = 0; x < side_; ++x)
                out.push_back({static_cast<long>(x), static_cast<long>(y)});
        return out;
    }

    bool fits(PixelCoord anchor, std::size_t width, std::size_t height) const noexcept {
        return anchor.x + side_ <= width && anchor.y + side_ <= height;
    }

  private:
    std::size_t side_;
};

namespace detail {

// log[(a + b) / (2 sqrt(ab))] written as log1p((s - 1)^2 / 2s), s = sqrt(max/min).
// Ordering the arguments makes the result bitwise symmetric.
inline double log_ratio_distance(double a, double b) noexcept {
    const double lo = a < b ? a : b;
    const double hi = a < b ? b : a;
    const double s = std::sqrt(hi / lo);
    const double t = s - 1.0;
    return std::log1p(t * t / (2.0 * s));
}

}  // namespace detail

/// Pixel-wise SAR dissimilarity D = log[(z1 + z2) / (2 sqrt(z1 z2))].
inline double pixel_distance(double z1, double z2) {
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw NumericError("pixel_distance requires strictly positive intensities");
    return detail::log_ratio_distance(z1, z2);
}

/// Distance between two noiseless pixels whose intensity ratio is rho^2:
/// log(rho/2 + 1/(2 rho)).
inline double speckle_free_distance(double rho) {
    if (!(rho > 0.0))
        throw NumericError("speckle_free_distance requires rho > 0");
    return detail::log_ratio_distance(rho * rho, 1.0);
}

/// Normalized SAR patch distance (1 / (mu_D N)) sum_k D(z(s+k), z(t+k)).
/// Its mean over homogeneous speckle is 1.
inline double sar_patch_distance(const SarImage& sar, PixelCoord s, PixelCoord t, const PatchGeometry& geom,
                                 double mu_d) {
    const auto& z = sar.intensity;
    if (!geom.fits(s, z.width(), z.height()) || !geom.fits(t, z.width(), z.height()))
        throw DataError("patch extends outside the SAR image");
    if (!(mu_d > 0.0))
        throw NumericError("mu_D must be positive");
    const std::size_t side = geom.side();
    double acc = 0.0;
    for (std::size_t ky = 0; ky < side; ++ky) {
        for (std::size_t kx = 0; kx < side; ++kx) {
            const double a = z(s.x + kx, s.y + ky);
            const double b = z(t.x + kx, t.y + ky);
            if (!(a > 0.0) || !(b > 0.0))
                throw NumericError("non-positive intensity under a patch; clamp the image first");
            acc += detail::log_ratio_distance(a, b);
        }
    }
    return acc / (mu_d * static_cast<double>(geom.size()));
}

/// Normalized Euclidean optical patch distance (1 / MN) sum_i sum_k [o_i(s+k) - o_i(t+k)]^2.
inline double optical_patch_distance(const OpticalGuide& guide, PixelCoord s, PixelCoord t,
                                     const PatchGeometry& geom) {
    if (guide.band_count() == 0)
        throw DataError("optical guide has no bands");
    if (!geom.fits(s, guide.width(), guide.height()) || !geom.fits(t, guide.width(), guide.height()))
        throw DataError("patch extends outside the optical guide");
    const std::size_t side = geom.side();
    double acc = 0.0;
    for (const auto& band : guide.bands) {
        for (std::size_t ky = 0; ky < side; ++ky) {
            for (std::size_t kx = 0; kx < side; ++kx) {
                const double d = band(s.x + kx, s.y + ky) - band(t.x + kx, t.y + ky);
                acc += d * d;
            }
        }
    }
    return acc / static_cast<double>(guide.band_count() * geom.size());
}

}  // namespace gnlm

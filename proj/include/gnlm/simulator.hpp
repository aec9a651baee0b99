#pragma once

// Synthetic ground truth for testing the despeckling chain: piecewise
// constant scenes with a matching pseudo-optical guide, multiplicative
// unit-mean Gamma speckle, and Monte-Carlo samples of the log-ratio distance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "gnlm/distances.hpp"
#include "gnlm/error.hpp"
#include "gnlm/parallel.hpp"
#include "gnlm/raster.hpp"
#include "gnlm/speckle_stats.hpp"

namespace gnlm {

//---------------------------------------------------------------------------//
// Random streams
//---------------------------------------------------------------------------//

/// SplitMix64 finalizer; derives independent seeds for substreams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum class Stream : std::uint64_t { scene = 1, speckle = 2, monte_carlo = 3 };

inline std::uint64_t stream_seed(std::uint64_t seed, Stream s, std::uint64_t block = 0) {
    return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(s)), block);
}

/// Uniform double in (0, 1] from the top 53 bits.
inline double uniform_open0(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Unit-mean Gamma variates with shape L (variance 1/L).
///
/// Marsaglia-Tsang squeeze/rejection for shape >= 1, boosted by U^(1/L) for
/// shape < 1; shape exactly 1 is sampled as Exponential(1). Normals come from
/// the polar method so the stream is identical across standard libraries.
class UnitMeanGamma {
  public:
    explicit UnitMeanGamma(double shape) : shape_(shape) {
        if (!(shape > 0.0) || !std::isfinite(shape))
            throw NumericError("Gamma shape must be positive and finite");
        const double a = shape < 1.0 ? shape + 1.0 : shape;
        d_ = a - 1.0 / 3.0;
        c_ = 1.0 / std::sqrt(9.0 * d_);
    }

    double operator()(std::mt19937_64& rng) {
        if (shape_ == 1.0)
            return -std::log(uniform_open0(rng));
        double v, z;
        for (;;) {
            do {
                z = normal(rng);
                v = 1.0 + c_ * z;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open0(rng);
            if (u < 1.0 - 0.0331 * z * z * z * z)
                break;
            if (std::log(u) < 0.5 * z * z + d_ * (1.0 - v + std::log(v)))
                break;
        }
        double x = d_ * v;
        if (shape_ < 1.0)
            x *= std::pow(uniform_open0(rng), 1.0 / shape_);
        return x / shape_;
    }

  private:
    double normal(std::mt19937_64& rng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform_open0(rng) - 1.0;
            v = 2.0 * uniform_open0(rng) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double shape_;
    double d_ = 0.0;
    double c_ = 0.0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

//---------------------------------------------------------------------------//
// Scenes
//---------------------------------------------------------------------------//

struct RectShape {
    std::size_t x = 0, y = 0, width = 0, height = 0;

    bool contains(double px, double py) const noexcept {
        return px >= static_cast<double>(x) && px < static_cast<double>(x + width) &&
               py >= static_cast<double>(y) && py < static_cast<double>(y + height);
    }
};

/// Pixels with nx * x + ny * y >= offset (pixel coordinates are integers).
struct HalfPlaneShape {
    double nx = 1.0, ny = 0.0, offset = 0.0;

    bool contains(double px, double py) const noexcept { return nx * px + ny * py >= offset; }
};

/// Pixels whose distance to the polyline is at most width / 2.
struct RoadShape {
    std::vector<std::array<double, 2>> points;
    double width = 1.0;

    bool contains(double px, double py) const noexcept {
        const double r2 = 0.25 * width * width;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            const double ax = points[i][0], ay = points[i][1];
            const double bx = points[i + 1][0], by = points[i + 1][1];
            const double vx = bx - ax, vy = by - ay;
            const double len2 = vx * vx + vy * vy;
            double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
            if (dx * dx + dy * dy <= r2)
                return true;
        }
        return false;
    }
};

using RegionShape = std::variant<RectShape, HalfPlaneShape, RoadShape>;

struct SceneRegion {
    RegionShape shape;
    double intensity = 1.0;
    std::vector<double> guide;  // one value per band
};

/// Bright scatterer: the clean intensity of a side x side square centered
/// on `position` is multiplied by `multiplier`. Invisible in the guide.
struct Reflector {
    PixelCoord position;
    double multiplier = 100.0;
    std::size_t side = 1;
};

struct SceneSpec {
    std::size_t width = 64;
    std::size_t height = 64;
    double background_intensity = 1.0;
    std::vector<double> background_guide = {0.5};
    /// Painted in order; later regions overwrite earlier ones.
    std::vector<SceneRegion> regions;
    std::vector<Reflector> reflectors;
    /// Guide replaced by `mismatch_guide` inside these rectangles.
    std::vector<RectShape> mismatch_regions;
    std::vector<double> mismatch_guide;
    /// Standard deviation of Gaussian noise added to the guide (clamped to [0, 1]).
    double guide_noise = 0.0;

    std::size_t band_count() const noexcept { return background_guide.size(); }

    void validate() const {
        if (width == 0 || height == 0)
            throw UsageError("scene dimensions must be positive");
        if (background_guide.empty())
            throw UsageError("scene guide needs at least one band");
        auto check_guide = [&](const std::vector<double>& g) {
            if (g.size() != band_count())
                throw UsageError("all guide colors must have the same band count");
            for (double v : g)
                if (!(v >= 0.0 && v <= 1.0))
                    throw UsageError("guide values must lie in [0, 1]");
        };
        check_guide(background_guide);
        if (!(background_intensity > 0.0))
            throw UsageError("scene intensities must be positive");
        for (const auto& r : regions) {
            check_guide(r.guide);
            if (!(r.intensity > 0.0))
                throw UsageError("scene intensities must be positive");
        }
        for (const auto& r : reflectors) {
            if (!(r.multiplier > 0.0) || r.side == 0)
                throw UsageError("reflectors need a positive multiplier and side");
            if (r.position.x >= width || r.position.y >= height)
                throw UsageError("reflector lies outside the scene");
        }
        if (!mismatch_regions.empty())
            check_guide(mismatch_guide.empty() ? background_guide : mismatch_guide);
        if (!(guide_noise >= 0.0))
            throw UsageError("guide noise must be nonnegative");
    }
};

struct Scene {
    SarImage clean;
    OpticalGuide guide;
};

/// Renders the clean intensity and the guide. Deterministic given the seed,
/// which only drives the optional guide noise.
inline Scene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t w = spec.width, h = spec.height, m = spec.band_count();
    Raster<double> clean(w, h, spec.background_intensity);
    std::vector<Raster<double>> bands;
    for (std::size_t b = 0; b < m; ++b)
        bands.emplace_back(w, h, spec.background_guide[b]);

    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double px = static_cast<double>(x), py = static_cast<double>(y);
            for (const auto& region : spec.regions) {
                const bool inside = std::visit([&](const auto& s) { return s.contains(px, py); }, region.shape);
                if (!inside)
                    continue;
                clean(x, y) = region.intensity;
                for (std::size_t b = 0; b < m; ++b)
                    bands[b](x, y) = region.guide[b];
            }
        }
    }
    for (const auto& r : spec.reflectors) {
        const long half = static_cast<long>(r.side / 2);
        for (long dy = 0; dy < static_cast<long>(r.side); ++dy) {
            for (long dx = 0; dx < static_cast<long>(r.side); ++dx) {
                const long x = static_cast<long>(r.position.x) - half + dx;
                const long y = static_cast<long>(r.position.y) - half + dy;
                if (x >= 0 && y >= 0 && x < static_cast<long>(w) && y < static_cast<long>(h))
                    clean(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) *= r.multiplier;
            }
        }
    }
    const auto& mismatch = spec.mismatch_guide.empty() ? spec.background_guide : spec.mismatch_guide;
    for (const auto& rect : spec.mismatch_regions)
        for (std::size_t y = rect.y; y < std::min(h, rect.y + rect.height); ++y)
            for (std::size_t x = rect.x; x < std::min(w, rect.x + rect.width); ++x)
                for (std::size_t b = 0; b < m; ++b)
                    bands[b](x, y) = mismatch[b];
    if (spec.guide_noise > 0.0) {
        std::mt19937_64 rng(stream_seed(seed, Stream::scene));
        std::normal_distribution<double> noise(0.0, spec.guide_noise);
        for (auto& band : bands)
            for (double& v : band.values())
                v = std::clamp(v + noise(rng), 0.0, 1.0);
    }
    return {SarImage(std::move(clean), 1.0), OpticalGuide(std::move(bands))};
}

/// Two vertical half-planes: intensity `left` for x < edge_column, `right`
/// otherwise, with distinct guide colors on each side plus a little guide noise.
inline SceneSpec two_region_mosaic(std::size_t width, std::size_t height, std::size_t edge_column,
                                   double left = 1.0, double right = 4.0, double guide_noise = 0.01) {
    SceneSpec spec;
    spec.guide_noise = guide_noise;
    spec.width = width;
    spec.height = height;
    spec.background_intensity = left;
    spec.background_guide = {0.25, 0.60};
    spec.regions.push_back({HalfPlaneShape{1.0, 0.0, static_cast<double>(edge_column)}, right, {0.70, 0.30}});
    return spec;
}

//---------------------------------------------------------------------------//
// Speckle
//---------------------------------------------------------------------------//

inline constexpr std::size_t kSpeckleRowsPerBlock = 64;

/// z = x u with u i.i.d. unit-mean Gamma of shape `looks`. Each block of 64
/// rows draws from its own substream of the seed.
inline SarImage apply_speckle(const SarImage& clean, double looks, std::uint64_t seed, unsigned threads = 0) {
    const SpeckleModel model(looks);
    const std::size_t w = clean.width(), h = clean.height();
    for (double v : clean.intensity.values())
        if (!(v > 0.0))
            throw DataError("clean intensities must be positive");
    Raster<double> noisy(w, h);
    const std::size_t blocks = (h + kSpeckleRowsPerBlock - 1) / kSpeckleRowsPerBlock;
    parallel_for(blocks, threads, [&](std::size_t block, unsigned) {
        std::mt19937_64 rng(stream_seed(seed, Stream::speckle, block));
        UnitMeanGamma gamma(model.looks);
        const std::size_t y1 = std::min(h, (block + 1) * kSpeckleRowsPerBlock);
        for (std::size_t y = block * kSpeckleRowsPerBlock; y < y1; ++y)
            for (std::size_t x = 0; x < w; ++x)
                noisy(x, y) = clean.intensity(x, y) * gamma(rng);
    });
    return SarImage(std::move(noisy), looks);
}

//---------------------------------------------------------------------------//
// Monte-Carlo distance samples
//---------------------------------------------------------------------------//

struct Histogram {
    double low = 0.0;
    double high = 1.0;
    std::vector<std::size_t> counts;
    std::size_t outside = 0;

    double bin_width() const { return (high - low) / static_cast<double>(counts.size()); }
    std::size_t total() const {
        std::size_t t = outside;
        for (auto c : counts)
            t += c;
        return t;
    }
};

inline Histogram make_histogram(const std::vector<double>& samples, std::size_t bins, double low, double high) {
    if (bins == 0 || !(high > low))
        throw UsageError("histogram needs bins > 0 and high > low");
    Histogram h{low, high, std::vector<std::size_t>(bins, 0), 0};
    const double scale = static_cast<double>(bins) / (high - low);
    for (double v : samples) {
        if (!(v >= low && v < high)) {
            ++h.outside;
            continue;
        }
        h.counts[std::min(bins - 1, static_cast<std::size_t>((v - low) * scale))] += 1;
    }
    return h;
}

/// Sum over bins of min(p1, p2) for two histograms on the same bins; samples
/// outside the range count toward the normalization.
inline double overlap_coefficient(const Histogram& a, const Histogram& b) {
    if (a.counts.size() != b.counts.size() || a.low != b.low || a.high != b.high)
        throw UsageError("histograms must share their binning");
    const double na = static_cast<double>(a.total());
    const double nb = static_cast<double>(b.total());
    double ov = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        ov += std::min(static_cast<double>(a.counts[i]) / na, static_cast<double>(b.counts[i]) / nb);
    return ov;
}

struct McDistanceOptions {
    double looks = 1.0;
    /// Square root of the signal intensity ratio, x(s) / x(t) = rho^2.
    double rho = 1.0;
    std::size_t patch_size = 1;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    /// Divide each sample by mu_D(L) so equal-signal patches average 1.
    bool normalized = false;
    std::size_t histogram_bins = 200;
    unsigned threads = 0;
};

struct McDistanceSamples {
    std::vector<double> samples;
    Histogram histogram;
    double mu_d = 0.0;
};

inline constexpr std::size_t kMcSamplesPerBlock = 16384;

/// Each sample averages `patch_size` pixel distances D(rho^2 u1, u2) over
/// independent speckle pairs.
inline McDistanceSamples mc_distance_samples(const McDistanceOptions& opt) {
    if (opt.samples < 10000)
        throw UsageError("Monte-Carlo estimates need at least 1e4 samples");
    if (opt.patch_size == 0 || !(opt.rho > 0.0))
        throw UsageError("patch size must be positive and rho > 0");
    const SpeckleModel model(opt.looks);
    McDistanceSamples out;
    out.mu_d = distance_moments(model).mean;
    out.samples.resize(opt.samples);
    const double ratio = opt.rho * opt.rho;
    const double scale = opt.normalized ? 1.0 / (out.mu_d * static_cast<double>(opt.patch_size))
                                        : 1.0 / static_cast<double>(opt.patch_size);
    const std::size_t blocks = (opt.samples + kMcSamplesPerBlock - 1) / kMcSamplesPerBlock;
    parallel_for(blocks, opt.threads, [&](std::size_t block, unsigned) {
        std::mt19937_64 rng(stream_seed(opt.seed, Stream::monte_carlo, block));
        UnitMeanGamma gamma(model.looks);
        const std::size_t end = std::min(opt.samples, (block + 1) * kMcSamplesPerBlock);
        for (std::size_t i = block * kMcSamplesPerBlock; i < end; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < opt.patch_size; ++k) {
                const double a = ratio * gamma(rng);
                const double b = gamma(rng);
                acc += detail::log_ratio_distance(a, b);
            }
            out.samples[i] = acc * scale;
        }
    });
    const double top = *std::max_element(out.samples.begin(), out.samples.end());
    out.histogram = make_histogram(out.samples, opt.histogram_bins, 0.0, std::nextafter(top, top + 1.0));
    return out;
}

}  // namespace gnlm

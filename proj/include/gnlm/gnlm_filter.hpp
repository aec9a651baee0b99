#pragma once

// Optical-guided patch-wise nonlocal means for SAR intensity images.
//
// For every anchor t the filter averages whole SAR patches z(s + k) drawn
// from a search window around t. Candidates whose normalized SAR distance
// fails d_S(s, t) < T are discarded, at most S0 of the survivors are kept
// (smallest optical distance first) and the rest are weighted by
//
//   w(s, t) = C exp{-lambda [gamma d_S(s, t) + (1 - gamma) d_O(s, t)]}.
//
// Overlapping patch estimates are aggregated with a uniform average. The
// optical guide only shapes the weights; the output is a convex combination
// of SAR samples.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnlm/distances.hpp"
#include "gnlm/error.hpp"
#include "gnlm/parallel.hpp"
#include "gnlm/raster.hpp"
#include "gnlm/speckle_stats.hpp"

namespace gnlm {

/// Reliability-test threshold, either absolute or as T = 1 + k sigma_P.
class ThresholdSpec {
  public:
    static ThresholdSpec k_sigma(double k) { return ThresholdSpec(true, k); }
    static ThresholdSpec absolute(double t) { return ThresholdSpec(false, t); }
    static ThresholdSpec disabled() { return absolute(std::numeric_limits<double>::infinity()); }

    bool is_k_sigma() const noexcept { return k_sigma_; }
    double value() const noexcept { return value_; }

    double resolve(const SpeckleModel& model, std::size_t patch_size) const {
        return k_sigma_ ? threshold(model, patch_size, value_) : value_;
    }

    void validate() const {
        if (k_sigma_ ? !(value_ >= 0.0) : !(value_ > 0.0))
            throw UsageError(k_sigma_ ? "threshold multiplier k must be nonnegative"
                                      : "absolute threshold must be positive");
    }

  private:
    ThresholdSpec(bool k_sigma, double v) : k_sigma_(k_sigma), value_(v) {}
    bool k_sigma_;
    double value_;
};

struct FilterConfig {
    std::size_t patch_side = 8;
    std::size_t search_side = 39;
    double lambda = 0.002;
    double gamma = 0.15;
    ThresholdSpec threshold = ThresholdSpec::k_sigma(2.0);
    /// Maximum number of predictors; nullopt means the whole search area.
    std::optional<std::size_t> s0 = 256;
    std::size_t anchor_step = 1;
    /// Intensities below the floor are raised to it before distances are
    /// taken; nullopt selects 1e-8 times the image mean.
    std::optional<double> intensity_floor;
    /// Worker threads, 0 for hardware concurrency. Does not affect output.
    unsigned threads = 0;

    /// Sharp detail preservation: T = 1 + 2 sigma, S0 = 256, lambda = 0.002, gamma = 0.15.
    static FilterConfig sharp() { return FilterConfig{}; }

    /// Smoother output: S0 = S and lambda = 0.004.
    static FilterConfig smooth() {
        FilterConfig c;
        c.s0.reset();
        c.lambda = 0.004;
        return c;
    }

    std::size_t search_area() const noexcept { return search_side * search_side; }
    std::size_t predictor_cap() const noexcept { return s0 ? std::min(*s0, search_area()) : search_area(); }

    void validate() const {
        if (patch_side == 0)
            throw UsageError("patch side must be positive");
        if (search_side == 0 || search_side % 2 == 0)
            throw UsageError("search side must be a positive odd integer");
        if (patch_side > search_side)
            throw UsageError("patch side must not exceed the search side");
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw UsageError("lambda must be positive and finite");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw UsageError("gamma must lie in [0, 1]");
        threshold.validate();
        if (s0 && *s0 == 0)
            throw UsageError("S0 must be at least 1");
        if (anchor_step == 0 || anchor_step > patch_side)
            throw UsageError("anchor step must lie in [1, patch side]");
        if (intensity_floor && !(*intensity_floor > 0.0))
            throw UsageError("intensity floor must be positive");
    }
};

struct Candidate {
    PixelCoord position;
    double sar_distance = 0.0;
    double optical_distance = 0.0;
    bool passed_test = false;
    /// Passed the test but dropped by the S0 cap.
    bool capped = false;
    double weight = 0.0;
};

/// All candidates of one anchor, in raster order of their positions.
struct PredictorSet {
    PixelCoord anchor;
    double threshold = 0.0;
    std::vector<Candidate> candidates;
    std::size_t passed_count = 0;
    std::size_t survivor_count = 0;
};

/// Anchor positions (patch top-left corners) along each axis.
struct AnchorGrid {
    std::vector<std::size_t> xs;
    std::vector<std::size_t> ys;

    std::size_t size() const noexcept { return xs.size() * ys.size(); }
};

struct FilterOutput {
    Raster<double> filtered;
    AnchorGrid anchors;
    /// |Omega'(t)| per anchor, indexed on the anchor grid.
    Raster<std::int32_t> predictor_count;
    /// 1 where only the anchor's own patch passed the test.
    Raster<std::uint8_t> unfiltered_mask;
    double threshold = 0.0;
    double mu_d = 0.0;
};

/// Anchor coordinates 0, step, 2 step, ... along an axis of `extent` pixels,
/// with the last patch position (extent - patch) appended when missed.
inline std::vector<std::size_t> anchor_positions(std::size_t extent, std::size_t patch, std::size_t step) {
    if (patch > extent)
        throw DataError("image is smaller than one patch");
    std::vector<std::size_t> out;
    const std::size_t last = extent - patch;
    for (std::size_t p = 0; p <= last; p += step)
        out.push_back(p);
    if (out.back() != last)
        out.push_back(last);
    return out;
}

inline AnchorGrid make_anchor_grid(std::size_t width, std::size_t height, const FilterConfig& config) {
    return {anchor_positions(width, config.patch_side, config.anchor_step),
            anchor_positions(height, config.patch_side, config.anchor_step)};
}

/// Positions in the search window centered on `anchor` whose patches lie
/// fully inside a width x height image, in raster order. Always contains
/// the anchor.
inline std::vector<PixelCoord> candidate_offsets(PixelCoord anchor, const FilterConfig& config, std::size_t width,
                                                 std::size_t height) {
    const PatchGeometry geom(config.patch_side);
    if (!geom.fits(anchor, width, height))
        throw DataError("anchor patch lies outside the image");
    const long half = static_cast<long>(config.search_side / 2);
    const long max_x = static_cast<long>(width - config.patch_side);
    const long max_y = static_cast<long>(height - config.patch_side);
    const long ax = static_cast<long>(anchor.x);
    const long ay = static_cast<long>(anchor.y);
    std::vector<PixelCoord> out;
    for (long y = std::max(0L, ay - half); y <= std::min(max_y, ay + half); ++y)
        for (long x = std::max(0L, ax - half); x <= std::min(max_x, ax + half); ++x)
            out.push_back({static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    return out;
}

inline double resolve_intensity_floor(const SarImage& sar, const FilterConfig& config) {
    if (config.intensity_floor)
        return *config.intensity_floor;
    const double floor = 1e-8 * mean_of(sar.intensity);
    return floor > 0.0 ? floor : std::numeric_limits<double>::min();
}

/// Copy of the intensities raised to the floor, used for the log-distances.
inline Raster<double> clamp_intensities(const Raster<double>& z, double floor) {
    Raster<double> out = z;
    for (double& v : out.values())
        v = std::max(v, floor);
    return out;
}

namespace detail {

struct Selection {
    std::vector<std::uint32_t> survivors;  // ascending candidate index
    std::vector<double> weights;           // aligned with survivors, sums to 1
    std::size_t passed = 0;
};

// Reliability test, S0 cap and weight law over one anchor's candidates.
// NaN distances mark candidates that do not exist (outside the image).
// Cap ranking: ascending d_O, then d_S, then candidate index.
inline void select_and_weight(std::span<const double> ds, std::span<const double> dopt, double threshold,
                              std::size_t cap, double lambda, double gamma, Selection& out) {
    auto& idx = out.survivors;
    idx.clear();
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds[i] < threshold)
            idx.push_back(static_cast<std::uint32_t>(i));
    out.passed = idx.size();
    if (idx.size() > cap) {
        auto before = [&](std::uint32_t a, std::uint32_t b) {
            if (dopt[a] != dopt[b])
                return dopt[a] < dopt[b];
            if (ds[a] != ds[b])
                return ds[a] < ds[b];
            return a < b;
        };
        std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cap), idx.end(), before);
        idx.resize(cap);
        std::sort(idx.begin(), idx.end());
    }
    auto& w = out.weights;
    w.resize(idx.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        w[i] = -lambda * (gamma * ds[idx[i]] + (1.0 - gamma) * dopt[idx[i]]);
        top = std::max(top, w[i]);
    }
    double total = 0.0;
    for (double& v : w) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : w)
        v /= total;
}

struct BandAccumulator {
    std::size_t first_row = 0;
    std::size_t rows = 0;
    std::vector<double> sum;
    std::vector<std::uint32_t> count;
};

struct BandScratch {
    std::vector<double> ds, dopt;    // [anchor][offset]
    std::vector<double> row_s, row_o;
    std::vector<double> hsum_s, hsum_o;  // [row][anchor column]
    std::vector<double> patch;
    Selection selection;
};

inline constexpr std::size_t kAnchorRowsPerBand = 8;

}  // namespace detail

/// Distances, test, cap and weights for a single anchor, computed directly
/// from the distance definitions. Intended for diagnostics.
inline PredictorSet select_predictors(const SarImage& sar, const OpticalGuide& guide, PixelCoord anchor,
                                      const FilterConfig& config, const DistanceStats& stats) {
    config.validate();
    require_same_shape(sar, guide);
    const PatchGeometry geom(config.patch_side);
    const SarImage clamped(clamp_intensities(sar.intensity, resolve_intensity_floor(sar, config)), sar.looks);
    const auto positions = candidate_offsets(anchor, config, sar.width(), sar.height());

    PredictorSet set;
    set.anchor = anchor;
    set.threshold = config.threshold.resolve(SpeckleModel(sar.looks), geom.size());
    std::vector<double> ds(positions.size()), dopt(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        ds[i] = sar_patch_distance(clamped, positions[i], anchor, geom, stats.mean);
        dopt[i] = optical_patch_distance(guide, positions[i], anchor, geom);
    }
    detail::Selection sel;
    detail::select_and_weight(ds, dopt, set.threshold, config.predictor_cap(), config.lambda, config.gamma, sel);

    set.candidates.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        auto& c = set.candidates[i];
        c.position = positions[i];
        c.sar_distance = ds[i];
        c.optical_distance = dopt[i];
        c.passed_test = ds[i] < set.threshold;
        c.capped = c.passed_test;
    }
    for (std::size_t i = 0; i < sel.survivors.size(); ++i) {
        auto& c = set.candidates[sel.survivors[i]];
        c.capped = false;
        c.weight = sel.weights[i];
    }
    set.passed_count = sel.passed;
    set.survivor_count = sel.survivors.size();
    return set;
}

/// Runs the guided nonlocal filter over the whole image.
///
/// Work is split into bands of anchor rows. Each band accumulates into its
/// own buffer and the buffers are merged in band order, so the result is
/// bitwise independent of the thread count.
inline FilterOutput filter(const SarImage& sar, const OpticalGuide& guide, const FilterConfig& config) {
    config.validate();
    require_same_shape(sar, guide);
    const std::size_t width = sar.width();
    const std::size_t height = sar.height();
    const std::size_t p = config.patch_side;
    if (p > width || p > height)
        throw DataError("image is smaller than one patch");

    const SpeckleModel model(sar.looks);
    const DistanceStats stats = distance_moments(model);
    const double threshold = config.threshold.resolve(model, p * p);
    const std::size_t cap = config.predictor_cap();
    const Raster<double>& z = sar.intensity;
    const Raster<double> zc = clamp_intensities(z, resolve_intensity_floor(sar, config));
    const std::size_t bands_m = guide.band_count();

    FilterOutput out;
    out.anchors = make_anchor_grid(width, height, config);
    out.threshold = threshold;
    out.mu_d = stats.mean;
    const auto& xs = out.anchors.xs;
    const auto& ys = out.anchors.ys;
    const std::size_t nax = xs.size();
    const std::size_t nay = ys.size();
    out.predictor_count = Raster<std::int32_t>(nax, nay, 0);
    out.unfiltered_mask = Raster<std::uint8_t>(nax, nay, 0);

    const long half = static_cast<long>(config.search_side / 2);
    std::vector<Offset> offsets;
    for (long dy = -half; dy <= half; ++dy)
        for (long dx = -half; dx <= half; ++dx)
            offsets.push_back({dx, dy});
    const std::size_t noff = offsets.size();

    const double sar_norm = stats.mean * static_cast<double>(p * p);
    const double opt_norm = static_cast<double>(bands_m * p * p);
    const long max_sx = static_cast<long>(width - p);
    const long max_sy = static_cast<long>(height - p);
    constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

    const std::size_t nbands = (nay + detail::kAnchorRowsPerBand - 1) / detail::kAnchorRowsPerBand;
    std::vector<detail::BandAccumulator> results(nbands);
    std::vector<detail::BandScratch> scratch(resolve_thread_count(config.threads));

    parallel_for(nbands, config.threads, [&](std::size_t band, unsigned worker) {
        auto& sc = scratch[worker];
        const std::size_t i0 = band * detail::kAnchorRowsPerBand;
        const std::size_t i1 = std::min(nay, i0 + detail::kAnchorRowsPerBand);
        const std::size_t band_anchors = (i1 - i0) * nax;
        const std::size_t row_lo = ys[i0];
        const std::size_t row_hi = ys[i1 - 1] + p;
        const std::size_t nrows = row_hi - row_lo;

        sc.ds.assign(band_anchors * noff, kMissing);
        sc.dopt.assign(band_anchors * noff, kMissing);
        sc.row_s.resize(width);
        sc.row_o.resize(width);
        sc.hsum_s.resize(nrows * nax);
        sc.hsum_o.resize(nrows * nax);

        // Per offset: pixel distances along each needed row, horizontal
        // patch sums at anchor columns, then vertical sums per anchor.
        for (std::size_t o = 0; o < noff; ++o) {
            const long dx = offsets[o].dx;
            const long dy = offsets[o].dy;
            const std::size_t x_lo = static_cast<std::size_t>(std::max(0L, -dx));
            const std::size_t x_hi = static_cast<std::size_t>(std::min<long>(width, static_cast<long>(width) - dx));
            for (std::size_t r = row_lo; r < row_hi; ++r) {
                const long rr = static_cast<long>(r) + dy;
                if (rr < 0 || rr >= static_cast<long>(height))
                    continue;
                const auto zt = zc.row(r);
                const auto zs = zc.row(static_cast<std::size_t>(rr));
                for (std::size_t x = x_lo; x < x_hi; ++x)
                    sc.row_s[x] = detail::log_ratio_distance(zs[x + dx], zt[x]);
                for (std::size_t x = x_lo; x < x_hi; ++x)
                    sc.row_o[x] = 0.0;
                for (const auto& b : guide.bands) {
                    const auto ot = b.row(r);
                    const auto os = b.row(static_cast<std::size_t>(rr));
                    for (std::size_t x = x_lo; x < x_hi; ++x) {
                        const double d = os[x + dx] - ot[x];
                        sc.row_o[x] += d * d;
                    }
                }
                double* hs = sc.hsum_s.data() + (r - row_lo) * nax;
                double* ho = sc.hsum_o.data() + (r - row_lo) * nax;
                for (std::size_t j = 0; j < nax; ++j) {
                    const long sx = static_cast<long>(xs[j]) + dx;
                    if (sx < 0 || sx > max_sx)
                        continue;
                    double as = 0.0, ao = 0.0;
                    for (std::size_t k = 0; k < p; ++k) {
                        as += sc.row_s[xs[j] + k];
                        ao += sc.row_o[xs[j] + k];
                    }
                    hs[j] = as;
                    ho[j] = ao;
                }
            }
            for (std::size_t i = i0; i < i1; ++i) {
                const long sy = static_cast<long>(ys[i]) + dy;
                if (sy < 0 || sy > max_sy)
                    continue;
                for (std::size_t j = 0; j < nax; ++j) {
                    const long sx = static_cast<long>(xs[j]) + dx;
                    if (sx < 0 || sx > max_sx)
                        continue;
                    double as = 0.0, ao = 0.0;
                    for (std::size_t k = 0; k < p; ++k) {
                        const std::size_t h = (ys[i] + k - row_lo) * nax + j;
                        as += sc.hsum_s[h];
                        ao += sc.hsum_o[h];
                    }
                    const std::size_t a = ((i - i0) * nax + j) * noff + o;
                    sc.ds[a] = as / sar_norm;
                    sc.dopt[a] = ao / opt_norm;
                }
            }
        }

        auto& acc = results[band];
        acc.first_row = row_lo;
        acc.rows = nrows;
        acc.sum.assign(nrows * width, 0.0);
        acc.count.assign(nrows * width, 0);
        sc.patch.resize(p * p);
        for (std::size_t i = i0; i < i1; ++i) {
            for (std::size_t j = 0; j < nax; ++j) {
                const std::size_t a = ((i - i0) * nax + j) * noff;
                detail::select_and_weight(std::span(sc.ds).subspan(a, noff), std::span(sc.dopt).subspan(a, noff),
                                          threshold, cap, config.lambda, config.gamma, sc.selection);
                out.predictor_count(j, i) = static_cast<std::int32_t>(sc.selection.passed);
                out.unfiltered_mask(j, i) = sc.selection.passed <= 1 ? 1 : 0;

                std::fill(sc.patch.begin(), sc.patch.end(), 0.0);
                for (std::size_t n = 0; n < sc.selection.survivors.size(); ++n) {
                    const Offset off = offsets[sc.selection.survivors[n]];
                    const double w = sc.selection.weights[n];
                    const std::size_t sx = static_cast<std::size_t>(static_cast<long>(xs[j]) + off.dx);
                    const std::size_t sy = static_cast<std::size_t>(static_cast<long>(ys[i]) + off.dy);
                    for (std::size_t ky = 0; ky < p; ++ky) {
                        const double* src = z.row(sy + ky).data() + sx;
                        double* dst = sc.patch.data() + ky * p;
                        for (std::size_t kx = 0; kx < p; ++kx)
                            dst[kx] += w * src[kx];
                    }
                }
                for (std::size_t ky = 0; ky < p; ++ky) {
                    const std::size_t base = (ys[i] + ky - row_lo) * width + xs[j];
                    for (std::size_t kx = 0; kx < p; ++kx) {
                        acc.sum[base + kx] += sc.patch[ky * p + kx];
                        acc.count[base + kx] += 1;
                    }
                }
            }
        }
    });

    Raster<double> sum(width, height, 0.0);
    Raster<std::uint32_t> count(width, height, 0);
    for (const auto& acc : results) {
        for (std::size_t r = 0; r < acc.rows; ++r) {
            for (std::size_t x = 0; x < width; ++x) {
                sum(x, acc.first_row + r) += acc.sum[r * width + x];
                count(x, acc.first_row + r) += acc.count[r * width + x];
            }
        }
    }
    out.filtered = Raster<double>(width, height, 0.0);
    for (std::size_t i = 0; i < out.filtered.size(); ++i)
        out.filtered[i] = sum[i] / static_cast<double>(count[i]);
    return out;
}

/// Per-anchor count of predictors passing the reliability test.
inline const Raster<std::int32_t>& predictor_count_map(const FilterOutput& output) {
    return output.predictor_count;
}

}  // namespace gnlm

#pragma once

// Statistics of the log-ratio distance between two pixels of a homogeneous
// L-look intensity image:
//
//   D = log[(X + Y) / (2 sqrt(XY))],  X, Y ~ Gamma(L, 1/L) i.i.d.
//
// R = exp(-D) satisfies R^2 ~ Beta(L, 1/2), which gives
//
//   p_D(d) = C(L) exp(-2Ld) / sqrt(1 - exp(-2d)),  C(L) = G(2L) / [2^(L-1) G(L)]^2
//   E[D]   = psi0(2L) - psi0(L) - log 2
//   Var[D] = psi1(L) / 2 - psi1(2L)
//
// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "gnlm/detail/quadrature.hpp"
#include "gnlm/error.hpp"

namespace gnlm {

/// Fully developed speckle with `looks` equivalent looks (real-valued shape).
struct SpeckleModel {
    double looks = 1.0;

    explicit SpeckleModel(double l) : looks(l) {
        if (!(l > 0.0) || !std::isfinite(l))
            throw NumericError("number of looks must be positive and finite, got " + std::to_string(l));
    }
};

/// Mean and variance of the pixel-wise distance, in nats.
struct DistanceStats {
    double mean = 0.0;
    double variance = 0.0;
    double looks = 1.0;

    double stddev() const { return std::sqrt(variance); }
};

namespace detail {

// Below this argument the recurrence shifts x upward before the
// asymptotic series is applied.
inline constexpr double kPolygammaCutoff = 10.0;

inline double digamma_asymptotic(double x) {
    const double inv2 = 1.0 / (x * x);
    // Bernoulli series: -sum B_2n / (2n x^2n)
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    return std::log(x) - 0.5 / x - series;
}

inline double trigamma_asymptotic(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/x + 1/2x^2 + sum B_2n / x^(2n+1)
    const double series =
        inv * inv2 *
        (1.0 / 6.0 -
         inv2 * (1.0 / 30.0 -
                 inv2 * (1.0 / 42.0 -
                         inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    return inv + 0.5 * inv2 + series;
}

}  // namespace detail

inline double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw NumericError("digamma requires a positive finite argument");
    double shift = 0.0;
    while (x < detail::kPolygammaCutoff) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    return detail::digamma_asymptotic(x) + shift;
}

inline double trigamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw NumericError("trigamma requires a positive finite argument");
    double shift = 0.0;
    while (x < detail::kPolygammaCutoff) {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    return detail::trigamma_asymptotic(x) + shift;
}

/// psi_order(x) for order 0 (digamma) or 1 (trigamma).
inline double polygamma(int order, double x) {
    switch (order) {
        case 0: return digamma(x);
        case 1: return trigamma(x);
        default: throw NumericError("polygamma order " + std::to_string(order) + " is not supported");
    }
}

/// log C(L), the normalizing constant of p_D.
inline double log_distance_pdf_constant(const SpeckleModel& model) {
    const double l = model.looks;
    return std::lgamma(2.0 * l) - 2.0 * ((l - 1.0) * std::numbers::ln2 + std::lgamma(l));
}

/// Density of the pixel distance under equal signal. Diverges like d^-1/2 at
/// the origin; d == 0 returns +infinity.
inline double distance_pdf(double d, const SpeckleModel& model) {
    if (!(d >= 0.0))
        throw NumericError("distance_pdf requires d >= 0");
    if (d == 0.0)
        return std::numeric_limits<double>::infinity();
    if (std::isinf(d))
        return 0.0;
    const double l = model.looks;
    return std::exp(log_distance_pdf_constant(model) - 2.0 * l * d) / std::sqrt(-std::expm1(-2.0 * d));
}

inline DistanceStats distance_moments(const SpeckleModel& model) {
    const double l = model.looks;
    DistanceStats s;
    s.looks = l;
    s.mean = digamma(2.0 * l) - digamma(l) - std::numbers::ln2;
    s.variance = 0.5 * trigamma(l) - trigamma(2.0 * l);
    return s;
}

/// Standard deviation of the normalized patch distance, sigma_D / (mu_D sqrt(N)).
/// The normalized mean is 1.
inline double patch_sigma(const SpeckleModel& model, std::size_t patch_size) {
    if (patch_size == 0)
        throw NumericError("patch size must be at least one pixel");
    const DistanceStats s = distance_moments(model);
    return s.stddev() / (s.mean * std::sqrt(static_cast<double>(patch_size)));
}

/// Reliability-test threshold T = 1 + k sigma_P.
inline double threshold(const SpeckleModel& model, std::size_t patch_size, double k) {
    if (!(k >= 0.0))
        throw NumericError("threshold multiplier k must be nonnegative");
    if (std::isinf(k))
        return std::numeric_limits<double>::infinity();
    return 1.0 + k * patch_sigma(model, patch_size);
}

/// Fraction of equal-signal predictors rejected by T = 1 + k sigma_P when the
/// patch distance is approximated as Gaussian.
inline double gaussian_rejection_fraction(double k) {
    return 0.5 * std::erfc(k / std::numbers::sqrt2);
}

/// P(D > d0) by adaptive quadrature.
///
/// With R = exp(-D) = sin(theta) the density becomes C(L) sin(theta)^(2L-1)
/// on [0, pi/2], which removes the endpoint singularity at d = 0. For L < 1/2
/// the remaining theta^(2L-1) factor is absorbed by theta = t^(1/(2L)).
inline double tail_probability(const SpeckleModel& model, double d0) {
    if (!(d0 >= 0.0))
        throw NumericError("tail_probability requires d0 >= 0");
    if (std::isinf(d0))
        return 0.0;
    const double l = model.looks;
    const double c = std::exp(log_distance_pdf_constant(model));
    const double theta0 = std::asin(std::exp(-d0));
    detail::QuadratureResult r;
    if (l >= 0.5) {
        r = detail::integrate_adaptive(
            [&](double theta) { return c * std::pow(std::sin(theta), 2.0 * l - 1.0); }, 0.0, theta0);
    } else {
        const double m = 1.0 / (2.0 * l);
        r = detail::integrate_adaptive(
            [&](double t) {
                const double theta = std::pow(t, m);
                const double sinc = theta > 0.0 ? std::sin(theta) / theta : 1.0;
                return c * m * std::pow(sinc, 2.0 * l - 1.0);
            },
            0.0, std::pow(theta0, 2.0 * l));
    }
    return std::clamp(r.value, 0.0, 1.0);
}

/// Closed-form P(D > d0) for single-look data: 1 - sqrt(1 - exp(-2 d0)).
inline double tail_probability_single_look(double d0) {
    if (!(d0 >= 0.0))
        throw NumericError("tail_probability requires d0 >= 0");
    return 1.0 - std::sqrt(-std::expm1(-2.0 * d0));
}

}  // namespace gnlm

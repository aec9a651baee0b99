#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace gnlm::detail {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
QuadratureResult gauss_kronrod_15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * pair;
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half), 1};
}

/// Adaptive G7K15 quadrature on a finite interval. Bisects the interval with
/// the largest error estimate until the summed estimate drops below
/// abs_tol or max_intervals is reached.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-9,
                                    std::size_t max_intervals = 4096) {
    struct Piece {
        double a, b;
        QuadratureResult r;
    };
    std::vector<Piece> pieces;
    pieces.push_back({a, b, gauss_kronrod_15(f, a, b)});
    auto total_error = [&] {
        double e = 0.0;
        for (const auto& p : pieces)
            e += p.r.error;
        return e;
    };
    while (total_error() > abs_tol && pieces.size() < max_intervals) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < pieces.size(); ++i)
            if (pieces[i].r.error > pieces[worst].r.error)
                worst = i;
        const Piece p = pieces[worst];
        const double mid = 0.5 * (p.a + p.b);
        pieces[worst] = {p.a, mid, gauss_kronrod_15(f, p.a, mid)};
        pieces.push_back({mid, p.b, gauss_kronrod_15(f, mid, p.b)});
    }
    QuadratureResult out;
    for (const auto& p : pieces) {
        out.value += p.r.value;
        out.error += p.r.error;
    }
    out.intervals = pieces.size();
    return out;
}

}  // namespace gnlm::detail

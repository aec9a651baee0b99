#include <cmath>
#include <limits>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <gtest/gtest.h>

#include "gnlm/speckle_stats.hpp"

using namespace gnlm;

namespace {

// Values frozen from an independent 30-digit evaluation.
struct Frozen {
    double looks, mean, variance, tail02;
};
constexpr Frozen kFrozen[] = {
    {1.0, 0.306852819440055, 0.177532966575887, 0.425822367237838},
    {2.0, 0.140186152773388, 0.038644077686998, 0.233380978624954},
    {4.0, 0.066376628963864, 0.008774463174526, 0.082589557145149},
    {16.0, 0.015869021647582, 0.000503525181318, 0.000384050694801},
    {2.5, 0.109813847226612, std::numeric_limits<double>::quiet_NaN(), 0.177631672179409},
    {0.3, 1.268757827746997, std::numeric_limits<double>::quiet_NaN(), 0.724291485271858},
};

// p_D from R^2 = exp(-2D) ~ Beta(L, 1/2).
double beta_density(double d, double looks) {
    boost::math::beta_distribution<double> b(looks, 0.5);
    const double r2 = std::exp(-2.0 * d);
    return 2.0 * r2 * boost::math::pdf(b, r2);
}

}  // namespace

TEST(Polygamma, MatchesFrozenValues) {
    EXPECT_NEAR(digamma(1.0), -0.5772156649015329, 1e-14);
    EXPECT_NEAR(trigamma(1.0), 1.6449340668482264, 1e-14);
    EXPECT_NEAR(digamma(2.0), 0.4227843350984671, 1e-14);
    EXPECT_NEAR(digamma(0.1), -10.42375494041108, 1e-12);
    EXPECT_NEAR(trigamma(0.1), 101.4332991507927, 1e-11);
    EXPECT_NEAR(digamma(7.3), 1.917820335637986, 1e-14);
    EXPECT_NEAR(trigamma(7.3), 0.1467957681314271, 1e-15);
    EXPECT_NEAR(digamma(123.4), 4.811373775116279, 1e-14);
    EXPECT_NEAR(trigamma(123.4), 0.008136651610865263, 1e-16);
}

TEST(Polygamma, AgreesWithBoostOnGrid) {
    for (double x = 0.05; x < 60.0; x *= 1.37) {
        EXPECT_NEAR(polygamma(0, x), boost::math::digamma(x), 1e-13 * std::max(1.0, std::abs(boost::math::digamma(x))));
        EXPECT_NEAR(polygamma(1, x), boost::math::trigamma(x), 1e-13 * boost::math::trigamma(x));
    }
}

TEST(Polygamma, RejectsBadArguments) {
    EXPECT_THROW(polygamma(0, 0.0), NumericError);
    EXPECT_THROW(polygamma(1, -2.0), NumericError);
    EXPECT_THROW(polygamma(2, 1.0), NumericError);
}

TEST(SpeckleModel, RejectsNonPositiveLooks) {
    EXPECT_THROW(SpeckleModel(0.0), NumericError);
    EXPECT_THROW(SpeckleModel(-1.0), NumericError);
    EXPECT_THROW(SpeckleModel(std::numeric_limits<double>::infinity()), NumericError);
}

TEST(DistanceMoments, MatchFrozenValues) {
    for (const auto& f : kFrozen) {
        const auto s = distance_moments(SpeckleModel(f.looks));
        EXPECT_NEAR(s.mean, f.mean, 1e-13) << "L=" << f.looks;
        if (!std::isnan(f.variance))
            EXPECT_NEAR(s.variance, f.variance, 1e-13) << "L=" << f.looks;
    }
    EXPECT_NEAR(distance_moments(SpeckleModel(1.0)).stddev(), 0.421346610969979, 1e-13);
}

TEST(DistanceMoments, AgreeWithBetaLogMoments) {
    // -log R = D, E[log R^2] = psi(L) - psi(L + 1/2), Var[log R^2] = psi1(L) - psi1(L + 1/2).
    for (double l : {0.7, 1.0, 3.0, 9.5}) {
        const auto s = distance_moments(SpeckleModel(l));
        EXPECT_NEAR(s.mean, -0.5 * (boost::math::digamma(l) - boost::math::digamma(l + 0.5)), 1e-13);
        EXPECT_NEAR(s.variance, 0.25 * (boost::math::trigamma(l) - boost::math::trigamma(l + 0.5)), 1e-13);
    }
}

TEST(DistancePdf, MatchesBetaDensity) {
    for (double l : {0.3, 1.0, 2.5, 16.0})
        for (double d : {1e-4, 0.01, 0.2, 0.5, 1.3, 4.0})
            EXPECT_NEAR(distance_pdf(d, SpeckleModel(l)), beta_density(d, l), 1e-11 * beta_density(d, l))
                << "L=" << l << " d=" << d;
}

TEST(DistancePdf, FrozenPointValue) {
    EXPECT_NEAR(distance_pdf(0.5, SpeckleModel(1.0)), 0.462706457376471, 1e-13);
    EXPECT_NEAR(std::exp(log_distance_pdf_constant(SpeckleModel(16.0))), 4.478397890925407, 1e-12);
}

TEST(DistancePdf, EdgeCases) {
    const SpeckleModel m(1.0);
    EXPECT_TRUE(std::isinf(distance_pdf(0.0, m)));
    EXPECT_EQ(distance_pdf(std::numeric_limits<double>::infinity(), m), 0.0);
    EXPECT_THROW(distance_pdf(-0.1, m), NumericError);
}

TEST(DistancePdf, IntegratesToOne) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (double l : {1.0, 4.0, 16.0}) {
        const SpeckleModel m(l);
        const double total = integrator.integrate([&](double d) { return distance_pdf(d, m); }, 0.0,
                                                  std::numeric_limits<double>::infinity());
        EXPECT_NEAR(total, 1.0, 1e-6) << "L=" << l;
    }
}

TEST(Threshold, PaperValue) {
    const SpeckleModel m(1.0);
    EXPECT_NEAR(patch_sigma(m, 64), 0.171640353402509, 1e-13);
    EXPECT_NEAR(threshold(m, 64, 2.0), 1.343280706805019, 1e-13);
    EXPECT_NEAR(threshold(m, 64, 4.0), 1.686561413610037, 1e-13);
    EXPECT_GE(threshold(m, 64, 2.0), 1.33);
    EXPECT_LE(threshold(m, 64, 2.0), 1.35);
}

TEST(Threshold, LimitsAndErrors) {
    const SpeckleModel m(1.0);
    EXPECT_EQ(threshold(m, 64, 0.0), 1.0);
    EXPECT_TRUE(std::isinf(threshold(m, 64, std::numeric_limits<double>::infinity())));
    EXPECT_THROW(threshold(m, 64, -1.0), NumericError);
    EXPECT_THROW(patch_sigma(m, 0), NumericError);
    // sigma_P shrinks as 1/sqrt(N).
    EXPECT_NEAR(patch_sigma(m, 256), patch_sigma(m, 64) / 2.0, 1e-15);
}

TEST(TailProbability, MatchesFrozenAndIncompleteBeta) {
    for (const auto& f : kFrozen) {
        const SpeckleModel m(f.looks);
        EXPECT_NEAR(tail_probability(m, 0.2), f.tail02, 1e-10) << "L=" << f.looks;
        for (double d0 : {0.01, 0.2, 0.9, 3.0})
            EXPECT_NEAR(tail_probability(m, d0), boost::math::ibeta(f.looks, 0.5, std::exp(-2.0 * d0)), 1e-10)
                << "L=" << f.looks << " d0=" << d0;
    }
}

TEST(TailProbability, SingleLookClosedFormAgrees) {
    for (double d0 : {0.0, 0.05, 0.2, 1.0, 5.0})
        EXPECT_NEAR(tail_probability(SpeckleModel(1.0), d0), tail_probability_single_look(d0), 1e-12);
    EXPECT_NEAR(tail_probability_single_look(0.2), 0.426, 0.001);
}

TEST(TailProbability, Boundaries) {
    const SpeckleModel m(2.0);
    EXPECT_NEAR(tail_probability(m, 0.0), 1.0, 1e-12);
    EXPECT_EQ(tail_probability(m, std::numeric_limits<double>::infinity()), 0.0);
    EXPECT_THROW(tail_probability(m, -0.5), NumericError);
    EXPECT_THROW(tail_probability_single_look(-0.5), NumericError);
}

TEST(GaussianRejection, StandardNormalTail) {
    EXPECT_NEAR(gaussian_rejection_fraction(2.0), 0.022750131948179, 1e-14);
    EXPECT_NEAR(gaussian_rejection_fraction(0.0), 0.5, 1e-15);
}

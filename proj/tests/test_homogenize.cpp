#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "twoscale/error.hpp"
#include "twoscale/homogenize.hpp"

namespace twoscale {
namespace {

TEST(BesselOracle, MatchesStandardLibrary) {
    for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        EXPECT_NEAR(oracle::bessel_i0(x), std::cyl_bessel_i(0.0, x), 1e-13 * std::cyl_bessel_i(0.0, x));
    }
    EXPECT_NEAR(oracle::bessel_i0(1.0), 1.266066, 1e-6);
    EXPECT_NEAR(oracle::bessel_i0(2.0), 2.279585, 1e-6);
    EXPECT_NEAR(oracle::bessel_i0(4.0), 11.30192, 1e-5);
}

TEST(PartitionIntegrals, ZeroPotentialIsThePeriod) {
    for (double sigma : {0.1, 1.0, 7.0}) {
        const auto z = partition_integrals(PeriodicPotential::zero(), sigma);
        EXPECT_NEAR(z.Z, kTwoPi, 1e-13);
        EXPECT_NEAR(z.Z_hat, kTwoPi, 1e-13);
    }
    const auto z = partition_integrals(PeriodicPotential::zero(3.0), 0.5);
    EXPECT_NEAR(z.Z, 3.0, 1e-13);
}

TEST(PartitionIntegrals, CosineMatchesBesselIdentity) {
    // int_0^{2 pi} exp(+-cos(y) / sigma) dy = 2 pi I_0(1 / sigma)
    for (double sigma : {1.0, 0.5}) {
        const double expected = kTwoPi * oracle::bessel_i0(1.0 / sigma);
        const auto z = partition_integrals(PeriodicPotential::cosine(1.0), sigma);
        EXPECT_NEAR(z.Z, expected, 1e-12 * expected);
        EXPECT_NEAR(z.Z_hat, expected, 1e-12 * expected);
    }
    EXPECT_NEAR(partition_integrals(PeriodicPotential::cosine(1.0), 1.0).Z, 7.95493, 1e-5);
    EXPECT_NEAR(partition_integrals(PeriodicPotential::cosine(1.0), 0.5).Z, 14.323057, 1e-6);
}

TEST(PartitionIntegrals, NonConvergenceReportsIterates) {
    QuadratureConfig quad;
    quad.nodes = 16;
    quad.max_nodes = 32;
    quad.refinement_tol = 1e-15;
    try {
        partition_integrals(PeriodicPotential::cosine(1.0), 0.05, quad);
        FAIL() << "expected QuadratureError";
    } catch (const QuadratureError& e) {
        EXPECT_TRUE(std::isfinite(e.last()));
        EXPECT_TRUE(std::isfinite(e.previous()));
        EXPECT_NE(e.last(), e.previous());
    }
}

TEST(PartitionIntegrals, RejectsBadInput) {
    EXPECT_THROW(partition_integrals(PeriodicPotential::cosine(1.0), 0.0), ConfigError);
    EXPECT_THROW(partition_integrals(PeriodicPotential::cosine(1.0), -1.0), ConfigError);
    QuadratureConfig quad;
    quad.nodes = 48;
    EXPECT_THROW(partition_integrals(PeriodicPotential::cosine(1.0), 1.0, quad), ConfigError);
    quad.nodes = 8;
    EXPECT_THROW(partition_integrals(PeriodicPotential::cosine(1.0), 1.0, quad), ConfigError);
}

TEST(EffectiveK, BesselValues) {
    EXPECT_NEAR(effective_K_1d(PeriodicPotential::zero(), 0.5), 1.0, 1e-14);
    EXPECT_NEAR(effective_K_1d(PeriodicPotential::cosine(1.0), 0.5), 0.192437, 1e-6);
    EXPECT_NEAR(effective_K_1d(PeriodicPotential::cosine(1.0), 1.0), 0.623861, 1e-6);
    EXPECT_NEAR(effective_K_via_cell(PeriodicPotential::cosine(1.0), 0.25), 0.0078288, 1e-7);
    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
        const double k = effective_K_1d(PeriodicPotential::cosine(1.0), sigma);
        EXPECT_NEAR(k, oracle::cosine_K(1.0, sigma), 1e-12 * k);
    }
}

TEST(EffectiveK, SmallTemperatureStaysFinite) {
    for (double sigma : {0.05, 0.01, 0.004}) {
        const double k = effective_K_1d(PeriodicPotential::cosine(1.0), sigma);
        EXPECT_TRUE(std::isfinite(k));
        EXPECT_GT(k, 0.0);
        EXPECT_LT(k, 1e-15);
    }
    const double k = effective_K_1d(PeriodicPotential::cosine(1.0), 0.05);
    const double expected = std::pow(std::cyl_bessel_i(0.0, 20.0), -2.0);
    EXPECT_NEAR(k, expected, 1e-10 * expected);
}

TEST(PartitionIntegrals, LogarithmsSurviveOverflow) {
    // exp(1 / 0.001) overflows a double; the logarithm must not.
    const double x = 1000.0;
    const auto z = partition_integrals(PeriodicPotential::cosine(1.0), 1.0 / x);
    // log(2 pi I_0(x)) from the large-argument expansion of I_0.
    const double expected = x + std::log(kTwoPi) - 0.5 * std::log(kTwoPi * x) +
                            std::log1p(1.0 / (8.0 * x) + 9.0 / (128.0 * x * x));
    EXPECT_NEAR(z.log_Z, expected, 1e-9 * expected);
    EXPECT_NEAR(z.log_Z_hat, expected, 1e-9 * expected);
}

TEST(EffectiveK, CellFormulaAgreesOnGrid) {
    for (double a : {0.25, 0.5, 1.0, 2.0}) {
        for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
            const auto fast = PeriodicPotential::cosine(a);
            const double k = effective_K_1d(fast, sigma);
            const double kc = effective_K_via_cell(fast, sigma);
            EXPECT_LT(std::abs(k - kc) / k, 1e-10) << "a=" << a << " sigma=" << sigma;
            EXPECT_GT(k, 0.0);
            EXPECT_LT(k, 1.0);
        }
    }
    EXPECT_EQ(effective_K_via_cell(PeriodicPotential::zero(), 1.0), effective_K_1d(PeriodicPotential::zero(), 1.0));
}

TEST(EffectiveK, IncreasesWithTemperature) {
    double previous = 0.0;
    for (double sigma : {0.25, 0.5, 0.7, 1.0}) {
        const double k = effective_K_1d(PeriodicPotential::cosine(1.0), sigma);
        EXPECT_GT(k, previous);
        previous = k;
    }
}

TEST(EffectiveK, QuadratureConverges) {
    QuadratureConfig coarse;
    coarse.nodes = 256;
    coarse.max_nodes = 512;
    coarse.refinement_tol = 1e-12;
    for (double sigma : {0.25, 0.5, 1.0}) {
        // Converges at or before 512 nodes.
        EXPECT_NO_THROW(effective_K_1d(PeriodicPotential::cosine(1.0), sigma, coarse));
    }
}

TEST(HomogenizedCoeffs, OuCosine) {
    const TwoScalePotential pot(Quadratic1D{1.0}, {PeriodicPotential::cosine(1.0)});
    const auto c = homogenized_coeffs(pot, 0.5);
    ASSERT_EQ(c.drift.size(), 1u);
    EXPECT_EQ(c.drift[0].name, "alpha");
    EXPECT_NEAR(c.drift[0].value, 0.192437, 1e-6);
    EXPECT_NEAR(c.Sigma[0], 0.096218, 1e-6);
    EXPECT_NEAR((c.drift[0].value / c.Sigma[0]) / (1.0 / 0.5), 1.0, 1e-12);
}

TEST(HomogenizedCoeffs, Bistable) {
    const TwoScalePotential pot(Bistable1D{1.0, 2.0}, {PeriodicPotential::cosine(1.0)});
    const auto c = homogenized_coeffs(pot, 0.5);
    EXPECT_NEAR(c.drift[0].value, 0.192437, 1e-6);
    EXPECT_NEAR(c.drift[1].value, 0.384874, 1e-6);
    EXPECT_NEAR(c.Sigma[0], 0.096218, 1e-6);
}

TEST(HomogenizedCoeffs, Quad2dIsRowScaledAndAsymmetric) {
    const TwoScalePotential pot(Quadratic2D{{2.0, 2.0, 2.0, 3.0}},
                                {PeriodicPotential::cosine(1.0), PeriodicPotential::cosine(0.5)});
    const auto c = homogenized_coeffs(pot, 0.5);
    EXPECT_NEAR(c.K[0], 0.192437, 1e-6);
    EXPECT_NEAR(c.K[1], 0.623861, 1e-6);
    EXPECT_NEAR(c.Sigma[0], 0.096218, 1e-6);
    EXPECT_NEAR(c.Sigma[1], 0.311930, 1e-6);
    const double k1 = oracle::cosine_K(1.0, 0.5), k2 = oracle::cosine_K(0.5, 0.5);
    EXPECT_NEAR(c.drift[0].value, 2.0 * k1, 1e-12);
    EXPECT_NEAR(c.drift[1].value, 2.0 * k1, 1e-12);
    EXPECT_NEAR(c.drift[2].value, 2.0 * k2, 1e-12);
    EXPECT_NEAR(c.drift[3].value, 3.0 * k2, 1e-12);
    EXPECT_NEAR(c.drift[2].value, 1.247721, 1e-6);
    EXPECT_GT(std::abs(c.drift[1].value - c.drift[2].value), 0.5);
}

TEST(HomogenizedCoeffs, DepletionOnlyWithFastPart) {
    const TwoScalePotential smooth(Quadratic1D{2.0}, {PeriodicPotential::zero()});
    const auto c = homogenized_coeffs(smooth, 0.3);
    EXPECT_NEAR(c.K[0], 1.0, 1e-13);
    EXPECT_NEAR(c.drift[0].value, 2.0, 1e-12);
    for (double a : {0.1, 1.0, 3.0}) {
        const TwoScalePotential rough(Quadratic1D{2.0}, {PeriodicPotential::cosine(a)});
        EXPECT_LT(homogenized_coeffs(rough, 0.3).K[0], 1.0 - 1e-6);
    }
}

}  // namespace
}  // namespace twoscale

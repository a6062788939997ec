#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "twoscale/error.hpp"
#include "twoscale/potentials.hpp"

namespace twoscale {
namespace {

TwoScalePotential ou(double alpha, PeriodicPotential fast = PeriodicPotential::cosine(1.0)) {
    return TwoScalePotential(Quadratic1D{alpha}, {fast});
}

TwoScalePotential quad2d_example() {
    return TwoScalePotential(Quadratic2D{{2.0, 2.0, 2.0, 3.0}},
                             {PeriodicPotential::cosine(1.0), PeriodicPotential::cosine(0.5)});
}

TEST(GradSlow, CatalogValues) {
    EXPECT_EQ(ou(1.0).grad_slow(std::vector{0.0})[0], 0.0);
    EXPECT_EQ(ou(1.0).grad_slow(std::vector{2.0})[0], 2.0);

    const TwoScalePotential bistable(Bistable1D{1.0, 2.0}, {PeriodicPotential::cosine(1.0)});
    EXPECT_DOUBLE_EQ(bistable.grad_slow(std::vector{1.0})[0], 1.0);

    const auto g = quad2d_example().grad_slow(std::vector{1.0, 0.0});
    EXPECT_DOUBLE_EQ(g[0], 2.0);
    EXPECT_DOUBLE_EQ(g[1], 2.0);

    const TwoScalePotential m4(Monomial1D{1.0, 4}, {PeriodicPotential::zero()});
    const TwoScalePotential m6(Monomial1D{2.0, 6}, {PeriodicPotential::zero()});
    EXPECT_DOUBLE_EQ(m4.grad_slow(std::vector{2.0})[0], 8.0);
    EXPECT_DOUBLE_EQ(m6.grad_slow(std::vector{2.0})[0], 64.0);
}

TEST(LaplacianSlow, CatalogValues) {
    EXPECT_EQ(ou(1.0).laplacian_slow(std::vector{-3.7}), 1.0);
    const TwoScalePotential m4(Monomial1D{1.0, 4}, {PeriodicPotential::zero()});
    EXPECT_DOUBLE_EQ(m4.laplacian_slow(std::vector{2.0}), 12.0);
    EXPECT_DOUBLE_EQ(quad2d_example().laplacian_slow(std::vector{0.3, -9.0}), 5.0);
}

TEST(GradFast, CosineValues) {
    const auto pot = ou(1.0);
    EXPECT_EQ(pot.grad_fast(std::vector{0.0})[0], -0.0);
    EXPECT_NEAR(pot.grad_fast(std::vector{std::numbers::pi / 2})[0], -1.0, 1e-15);

    const auto g = quad2d_example().grad_fast(std::vector{std::numbers::pi / 2, std::numbers::pi / 2});
    EXPECT_NEAR(g[0], -1.0, 1e-15);
    EXPECT_NEAR(g[1], -0.5, 1e-15);

    const auto zero = ou(1.0, PeriodicPotential::zero()).grad_fast(std::vector{1.3});
    EXPECT_EQ(zero[0], 0.0);
}

TEST(Shapes, DimensionMismatchThrows) {
    EXPECT_THROW(ou(1.0).grad_slow(std::vector{1.0, 2.0}), ShapeError);
    EXPECT_THROW(quad2d_example().laplacian_slow(std::vector{1.0}), ShapeError);
    EXPECT_THROW(quad2d_example().grad_fast(std::vector{1.0}), ShapeError);
    EXPECT_THROW(TwoScalePotential(Quadratic1D{1.0}, {}), ShapeError);
}

TEST(Validation, RejectsBadModels) {
    EXPECT_THROW(TwoScalePotential(Quadratic2D{{1.0, 2.0, 2.0, 1.0}},
                                   {PeriodicPotential::zero(), PeriodicPotential::zero()}),
                 ConfigError);  // indefinite
    EXPECT_THROW(TwoScalePotential(Quadratic2D{{2.0, 1.0, 0.5, 3.0}},
                                   {PeriodicPotential::zero(), PeriodicPotential::zero()}),
                 ConfigError);  // not symmetric
    EXPECT_THROW(TwoScalePotential(Monomial1D{1.0, 5}, {PeriodicPotential::zero()}), ConfigError);
    EXPECT_THROW(PeriodicPotential::cosine(std::nan("")), ConfigError);
    EXPECT_THROW(PeriodicPotential::zero(0.0), ConfigError);
}

TEST(Catalog, TagsRoundTrip) {
    for (const char* tag : {"ou", "bistable", "monomial4", "monomial6", "quad2d"}) {
        ModelSpec spec;
        spec.tag = tag;
        EXPECT_EQ(make_potential(spec).tag(), tag);
    }
    ModelSpec bad;
    bad.tag = "quartic";
    EXPECT_THROW(make_potential(bad), ConfigError);
    bad.tag = "ou";
    bad.fast = "square";
    EXPECT_THROW(make_potential(bad), ConfigError);

    ModelSpec q;
    q.tag = "quad2d";
    q.amplitudes = {1.0, 0.5};
    const auto pot = make_potential(q);
    EXPECT_EQ(pot.fast()[1].amplitude(), 0.5);
    EXPECT_EQ(pot.fast()[0].period(), kTwoPi);
}

TEST(DriftFeatures, ReproduceMinusGradSlow) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::vector<TwoScalePotential> models{
        ou(1.7), TwoScalePotential(Bistable1D{0.8, 1.9}, {PeriodicPotential::zero()}),
        TwoScalePotential(Monomial1D{1.3, 4}, {PeriodicPotential::zero()}),
        TwoScalePotential(Monomial1D{0.6, 6}, {PeriodicPotential::zero()}), quad2d_example()};
    for (const auto& pot : models) {
        const auto d = pot.dimension();
        const auto theta = pot.drift_parameters();
        std::vector<double> phi(theta.size() * d);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(d);
            for (auto& v : x) v = u(gen);
            pot.drift_features(x, phi);
            const auto grad = pot.grad_slow(x);
            for (std::size_t i = 0; i < d; ++i) {
                double drift = 0.0;
                for (std::size_t k = 0; k < theta.size(); ++k) drift += theta[k].value * phi[k * d + i];
                EXPECT_NEAR(drift, -grad[i], 1e-12 * (1.0 + std::abs(grad[i]))) << pot.tag();
            }
        }
    }
}

//---------------------------------------------------------------------------//
// Properties
//---------------------------------------------------------------------------//

std::vector<TwoScalePotential> all_models() {
    return {ou(1.0), TwoScalePotential(Bistable1D{1.0, 2.0}, {PeriodicPotential::cosine(1.0)}),
            TwoScalePotential(Monomial1D{1.0, 4}, {PeriodicPotential::cosine(1.0)}),
            TwoScalePotential(Monomial1D{1.0, 6}, {PeriodicPotential::cosine(0.5)}), quad2d_example()};
}

TEST(Properties, GradFastIsPeriodic) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (const auto& pot : all_models()) {
        const auto d = pot.dimension();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> y(d);
            for (auto& v : y) v = u(gen);
            const auto g = pot.grad_fast(y);
            for (std::size_t axis = 0; axis < d; ++axis) {
                auto shifted = y;
                shifted[axis] += pot.fast()[axis].period();
                const auto gs = pot.grad_fast(shifted);
                for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(gs[i], g[i], 1e-13);
            }
        }
    }
}

TEST(Properties, GradientsMatchFiniteDifferences) {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double h = 1e-4;
    for (const auto& pot : all_models()) {
        const auto d = pot.dimension();
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> x(d);
            for (auto& v : x) v = u(gen);
            const auto gs = pot.grad_slow(x);
            const auto gf = pot.grad_fast(x);
            for (std::size_t i = 0; i < d; ++i) {
                auto xp = x;
                auto xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd_slow = (pot.slow_value(xp) - pot.slow_value(xm)) / (2 * h);
                const double fd_fast = (pot.fast_value(xp) - pot.fast_value(xm)) / (2 * h);
                const double scale_slow = std::max(std::abs(gs[i]), 1.0);
                const double scale_fast = std::max(std::abs(gf[i]), 1.0);
                EXPECT_LT(std::abs(fd_slow - gs[i]) / scale_slow, 1e-6) << pot.tag();
                EXPECT_LT(std::abs(fd_fast - gf[i]) / scale_fast, 1e-6) << pot.tag();
            }
        }
    }
}

TEST(Properties, LaplacianMatchesSecondDifferences) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double h = 1e-3;
    for (const auto& pot : all_models()) {
        const auto d = pot.dimension();
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> x(d);
            for (auto& v : x) v = u(gen);
            double fd = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                auto xp = x;
                auto xm = x;
                xp[i] += h;
                xm[i] -= h;
                fd += (pot.slow_value(xp) - 2.0 * pot.slow_value(x) + pot.slow_value(xm)) / (h * h);
            }
            const double exact = pot.laplacian_slow(x);
            EXPECT_LT(std::abs(fd - exact) / std::max(std::abs(exact), 1.0), 1e-5) << pot.tag();
        }
    }
}

}  // namespace
}  // namespace twoscale

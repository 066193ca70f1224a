#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <sympath/index.hpp>

#include "random_paths.hpp"

using namespace sympath;
using std::numbers::pi;

namespace {

HalfInteger half(std::int64_t h) { return HalfInteger::from_halves(h); }

/// Index of t -> rotation(theta t), t in [0, 1], theta >= 0, counted by hand:
/// crossings at multiples of 2pi, kernel dimension 2, positive definite form.
HalfInteger rotation_oracle(double theta)
{
    std::int64_t halves = 2; // start crossing, weight 1/2 times signature 2
    int full = static_cast<int>(std::floor(theta / (2 * pi) + 1e-12));
    bool ends_on_cycle = std::abs(theta - 2 * pi * std::round(theta / (2 * pi))) < 1e-12 && theta > 0;
    halves += 4 * (ends_on_cycle ? full - 1 : full);
    if (ends_on_cycle)
        halves += 2;
    if (theta == 0.0)
        halves = 0;
    return half(halves);
}

} // namespace

TEST(Crossings, FullRotationHasTwoEndpointCrossings)
{
    auto r = crossings(paths::rotation(2 * pi, 1.0));
    ASSERT_EQ(r.crossings.size(), 2u);
    EXPECT_NEAR(r.crossings[0].time, 0.0, 1e-12);
    EXPECT_NEAR(r.crossings[1].time, 1.0, 1e-12);
    for (const auto& c : r.crossings) {
        EXPECT_EQ(c.kernel_dim, 2);
        EXPECT_EQ(c.signature, 2);
        EXPECT_TRUE(c.endpoint);
    }
    EXPECT_TRUE(r.regularized);
}

TEST(Crossings, InteriorCrossingLocatedByPolishing)
{
    auto r = crossings(paths::rotation(2 * pi, 1.5));
    ASSERT_EQ(r.crossings.size(), 2u);
    EXPECT_NEAR(r.crossings[1].time, 1.0, 1e-9);
    EXPECT_FALSE(r.crossings[1].endpoint);
}

TEST(Crossings, ConstantPathIsDegenerate)
{
    auto r = crossings(paths::constant_identity(1.0));
    ASSERT_FALSE(r.crossings.empty());
    EXPECT_EQ(r.crossings[0].kernel_dim, 2);
    EXPECT_EQ(r.crossings[0].signature, 0);
    EXPECT_FALSE(r.regularized);
}

TEST(Crossings, ShearHasNegativeRankOneForm)
{
    auto r = crossings(paths::shear(1.0, 1.0));
    ASSERT_GE(r.crossings.size(), 1u);
    EXPECT_EQ(r.crossings[0].time, 0.0);
    EXPECT_EQ(r.crossings[0].kernel_dim, 2);
    EXPECT_EQ(r.crossings[0].signature, -1);
    // The shear stays on the cycle with a one-dimensional kernel.
    for (std::size_t i = 1; i < r.crossings.size(); ++i)
        EXPECT_EQ(r.crossings[i].kernel_dim, 1);
}

TEST(RsIndex, RotationLoops)
{
    for (int k = 1; k <= 5; ++k) {
        auto est = rs_index(paths::rotation(2 * pi * k, 1.0));
        EXPECT_EQ(est.value, HalfInteger::from_int(2 * k)) << "k=" << k;
        EXPECT_EQ(est.value, rotation_oracle(2 * pi * k));
    }
}

TEST(RsIndex, ConstantAndShear)
{
    EXPECT_EQ(rs_index(paths::constant_identity(1.0)).value, HalfInteger::from_int(0));
    EXPECT_EQ(rs_index(paths::shear(1.0, 1.0)).value, half(-1));
    EXPECT_EQ(rs_index(paths::shear(-1.0, 1.0)).value, half(1));
}

TEST(RsIndex, NonLoopRotationsMatchOracle)
{
    for (double theta : {0.5, pi, 3.0, 2 * pi + 0.3, 5 * pi, 9.7})
        EXPECT_EQ(rs_index(paths::rotation(theta, 1.0)).value, rotation_oracle(theta)) << theta;
}

TEST(RsIndex, HigherDimensionalRotationAddsPerPair)
{
    auto est = rs_index(paths::rotation(2 * pi, 1.0, 4));
    EXPECT_EQ(est.value, HalfInteger::from_int(4));
    EXPECT_EQ(rs_index(paths::constant_identity(1.0, 6)).value, HalfInteger::from_int(0));
}

TEST(RsIndexKan, Examples)
{
    EXPECT_EQ(rs_index_kan(paths::rotation(2 * pi, 1.0)).value, HalfInteger::from_int(2));
    EXPECT_EQ(rs_index_kan(paths::rotation(pi, 1.0)).value, HalfInteger::from_int(1));
    EXPECT_EQ(rs_index_kan(paths::constant_identity(1.0)).value, HalfInteger::from_int(0));
    EXPECT_EQ(rs_index_kan(paths::shear(1.0, 1.0)).value, half(-1));
    EXPECT_EQ(rs_index(paths::rotation(pi, 1.0)).value, HalfInteger::from_int(1));
}

TEST(RsIndex, MethodAgreementOnRandomPaths)
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        auto p = testutil::random_lie_path(rng, 2, 6, 3.0, 1.5);
        auto a = rs_index(p);
        auto b = rs_index_kan(p);
        EXPECT_EQ(a.value, b.value) << "case " << i;
    }
}

TEST(RsIndexSpectral, Examples)
{
    for (double theta : {0.5, pi, 2 * pi, 3.0, 5 * pi, 9.7})
        EXPECT_EQ(rs_index_spectral(paths::rotation(theta, 1.0)).value, rotation_oracle(theta)) << theta;
    EXPECT_EQ(rs_index_spectral(paths::constant_identity(1.0, 6)).value, HalfInteger::from_int(0));
    EXPECT_EQ(rs_index_spectral(paths::shear(1.0, 1.0)).value, half(-1));
    EXPECT_EQ(rs_index_spectral(paths::shear(-1.0, 1.0)).value, half(1));
    EXPECT_EQ(rs_index_spectral(paths::rotation(-2 * pi, 1.0)).value, HalfInteger::from_int(-2));
    EXPECT_EQ(rs_index_spectral(paths::rotation(2 * pi, 1.0, 4)).value, HalfInteger::from_int(4));
}

TEST(RsIndexSpectral, AgreesWithCrossingForms)
{
    std::mt19937_64 rng(77);
    for (int i = 0; i < 60; ++i) {
        int dim = 2 + 2 * (i % 3);
        auto p = testutil::random_lie_path(rng, dim, 6, 3.0, 1.5);
        EXPECT_EQ(rs_index_spectral(p).value, rs_index(p).value) << "case " << i << " dim " << dim;
    }
}

TEST(RsIndex, LoopsHaveEvenIndex)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto p = testutil::random_lie_path(rng, 2, 4, 2.0, 1.0);
        // Close the path into a loop by running back along itself and
        // adding full turns.
        int k = static_cast<int>(rng() % 3);
        auto loop = catenate(catenate(p, reversed(p).rebased(symplectic_inverse(p.back()))),
                             paths::rotation(2 * pi * (k + 1), 1.0));
        auto est = rs_index(loop);
        EXPECT_TRUE(est.value.is_integer() && est.value.halves() % 4 == 0) << est.value;
        EXPECT_EQ(est.value, HalfInteger::from_int(2 * (k + 1)));
    }
}

TEST(RsIndex, CatenationExamples)
{
    auto loop = paths::rotation(2 * pi, 1.0);
    EXPECT_EQ(rs_index(catenate(loop, loop)).value, HalfInteger::from_int(4));
    auto sh = paths::shear(1.0, 1.0);
    auto back = reversed(sh).rebased(symplectic_inverse(sh.back()));
    EXPECT_EQ(rs_index(catenate(sh, back)).value, HalfInteger::from_int(0));
    auto p = paths::rotation(2.0, 1.0);
    auto tail = paths::constant_identity(0.5);
    EXPECT_EQ(rs_index(catenate(p, tail)).value, rs_index(p).value);
}

TEST(RsIndex, CatenationIsAdditive)
{
    std::mt19937_64 rng(77);
    for (int i = 0; i < 30; ++i) {
        auto p1 = testutil::random_lie_path(rng, 2, 3, 1.5, 1.5);
        auto p2 = testutil::random_lie_path(rng, 2, 3, 1.5, 1.5);
        auto cat = catenate(p1, p2);
        auto sum = rs_index(p1).value + rs_index(p2.rebased(p1.back())).value;
        EXPECT_EQ(rs_index(cat).value, sum) << "case " << i;
    }
}

TEST(MeanIndex, RotationGenerators)
{
    auto full = mean_index(paths::rotation(2 * pi, 1.0), 8);
    EXPECT_NEAR(full.value, 2.0, 1e-12);
    auto halfturn = mean_index(paths::rotation(pi, 1.0), 8);
    EXPECT_NEAR(halfturn.value, 1.0, 1e-12);
    auto none = mean_index(paths::constant_identity(1.0), 4);
    EXPECT_NEAR(none.value, 0.0, 1e-12);
}

TEST(MeanIndex, IterationLinearity)
{
    double base = mean_index(paths::rotation(pi, 1.0), 6).value;
    for (int k : {2, 3, 5}) {
        double it = mean_index(paths::rotation(pi * k, 1.0), 6).value;
        EXPECT_NEAR(it, k * base, 1e-8);
    }
}

TEST(MeanIndex, BoundedDefect)
{
    auto gen = paths::rotation(2.3, 1.0);
    auto r = mean_index(gen, 12);
    double defect6 = r.indices[5].value() - 6 * r.value;
    double defect12 = r.indices[11].value() - 12 * r.value;
    EXPECT_LE(std::abs(defect12 - defect6), 2.0);
}

TEST(MeanIndex, RejectsNonIdentityStart)
{
    auto p = paths::rotation(1.0, 1.0).rebased(rotation2(0.2));
    EXPECT_THROW(mean_index(p, 4), ValidationError);
}

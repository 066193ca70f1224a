#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <sympath/kan.hpp>
#include <sympath/path.hpp>

using namespace sympath;

namespace {

Matrix m2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST(HalfInteger, ArithmeticIsExact)
{
    auto a = HalfInteger::from_halves(-1);
    auto b = HalfInteger::from_int(3);
    EXPECT_EQ((a + b).halves(), 5);
    EXPECT_DOUBLE_EQ((a + b).value(), 2.5);
    EXPECT_FALSE(a.is_integer());
    EXPECT_TRUE((a + a).is_integer());
}

TEST(Symplectic, OmegaMatchesPairForm)
{
    Vector u(4), w(4);
    u << 1, 2, 3, 4;
    w << -1, 0.5, 2, -3;
    Matrix om = omega_matrix(4);
    EXPECT_NEAR(omega0(u, w), u.dot(om * w), 1e-15);
    // omega0(a, b) = <I a, b>
    EXPECT_NEAR(omega0(u, w), (complex_structure(4) * u).dot(w), 1e-15);
    EXPECT_THROW(omega_matrix(3), ValidationError);
}

TEST(Symplectic, RejectsNonSymplectic)
{
    EXPECT_NO_THROW(require_symplectic(rotation2(0.3)));
    EXPECT_THROW(require_symplectic(m2(2, 0, 0, 2)), ValidationError);
}

TEST(Kan, IdentityDecomposesTrivially)
{
    auto f = kan_decompose(Matrix::Identity(2, 2));
    EXPECT_DOUBLE_EQ(f.angle, 0.0);
    EXPECT_DOUBLE_EQ(f.scale, 1.0);
    EXPECT_DOUBLE_EQ(f.shear, 0.0);
}

TEST(Kan, QuarterRotation)
{
    auto f = kan_decompose(m2(0, -1, 1, 0));
    EXPECT_NEAR(f.angle, std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(f.scale, 1.0, 1e-15);
    EXPECT_NEAR(f.shear, 0.0, 1e-15);
}

TEST(Kan, DiagonalScaling)
{
    auto f = kan_decompose(m2(2, 0, 0, 0.5));
    EXPECT_NEAR(f.angle, 0.0, 1e-15);
    EXPECT_NEAR(f.scale, 2.0, 1e-15);
    EXPECT_NEAR(f.shear, 0.0, 1e-15);
}

TEST(Kan, RejectsNonSymplecticInput) { EXPECT_THROW(kan_decompose(m2(1, 1, 1, 1)), ValidationError); }

TEST(Kan, RecompositionProperty)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        KanFactors f{u(rng), std::exp(u(rng) / 2), u(rng)};
        Matrix m = kan_compose(f);
        auto g = kan_decompose(m);
        EXPECT_LT((kan_compose(g) - m).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_GT(g.scale, 0.0);
    }
}

TEST(KanWinding, FullAndTripleRotation)
{
    EXPECT_NEAR(kan_winding(paths::rotation(2 * std::numbers::pi, 1.0)), 1.0, 1e-12);
    EXPECT_NEAR(kan_winding(paths::rotation(6 * std::numbers::pi, 1.0)), 3.0, 1e-12);
    EXPECT_NEAR(kan_winding(paths::constant_identity(1.0)), 0.0, 0.0);
}

TEST(KanWinding, CoarseGridIsRefused)
{
    // Samples only: a full turn in three steps jumps the angle by 2pi/3.
    std::vector<double> ts{0.0, 1.0 / 3, 2.0 / 3, 1.0};
    std::vector<Matrix> ms;
    for (double t : ts)
        ms.push_back(rotation2(2 * std::numbers::pi * t));
    SymplecticPath p(ts, ms, {}, {.gap_max = 10.0});
    EXPECT_THROW(kan_winding(p), ResolutionError);
    // With an evaluator the lift follows the turn.
    auto q = SymplecticPath::from_function([](double t) { return rotation2(2 * std::numbers::pi * t); }, 1.0, 3,
                                           {.gap_max = 10.0});
    EXPECT_NEAR(kan_winding(q), 1.0, 1e-12);
}

TEST(Path, ValidatesInvariants)
{
    std::vector<double> ts{0.0, 0.5, 1.0};
    std::vector<Matrix> ms{Matrix::Identity(2, 2), rotation2(0.1), rotation2(0.2)};
    EXPECT_NO_THROW(SymplecticPath(ts, ms));
    EXPECT_THROW(SymplecticPath({0.0, 0.0, 1.0}, ms), ValidationError);
    EXPECT_THROW(SymplecticPath(ts, {rotation2(0.1), rotation2(0.1), rotation2(0.2)}), ValidationError);
    EXPECT_THROW(SymplecticPath(ts, {Matrix::Identity(2, 2), rotation2(1.5), rotation2(0.2)}), ResolutionError);
}

TEST(Path, InterpolationStaysSymplectic)
{
    std::vector<double> ts{0.0, 1.0};
    Matrix end = kan_compose({0.3, 1.2, 0.1});
    SymplecticPath p(ts, {Matrix::Identity(2, 2), end});
    for (double t : {0.1, 0.37, 0.8})
        EXPECT_LT(symplectic_residual(p.at(t)), 1e-12);
    EXPECT_LT((p.at(1.0) - end).norm(), 1e-14);
}

TEST(Path, CatenationIsContinuousAndRebased)
{
    auto a = paths::rotation(1.0, 1.0);
    auto b = paths::rotation(1.0, 1.0);
    auto c = catenate(a, b);
    EXPECT_DOUBLE_EQ(c.horizon(), 2.0);
    EXPECT_LT((c.back() - rotation2(2.0)).norm(), 1e-12);
    EXPECT_LT((c.at(1.5) - rotation2(1.5)).norm(), 1e-12);
    Matrix far = kan_compose({0.0, 2.0, 0.0});
    EXPECT_THROW(catenate(a, b.rebased(far)), ResolutionError);
}

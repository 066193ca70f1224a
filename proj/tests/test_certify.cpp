#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "sympath/certify.hpp"

using namespace sympath;

namespace {

const double kPi = std::numbers::pi;

Vector sphere_point(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sphere_pushforward(surfaces::round_sphere())(rng);
}

/// Blocks with f(t) A(t) in place of A(t).
StructuredBlocks rescaled(const StructuredBlocks& b, std::function<double(double)> f)
{
    StructuredBlocks r = b;
    r.R = [b, f](double t) { return Matrix(f(t) * b.R(t)); };
    r.X = [b, f](double t) { return Vector(f(t) * b.X(t)); };
    r.Y = [b, f](double t) { return Vector(f(t) * b.Y(t)); };
    r.a = [b, f](double t) { return f(t) * b.a(t); };
    r.b = [b, f](double t) { return f(t) * b.b(t); };
    return r;
}

} // namespace

TEST(GrowthFit, RotationSlope)
{
    // Half-turn horizons T_k = (2k + 1) pi / w give mu = 2k + 1 = w T / pi.
    const double w = 3.0;
    std::vector<double> Ts;
    for (int k = 0; k < 20; ++k)
        Ts.push_back((2 * k + 1) * kPi / w);
    auto fit = fit_index_growth([w](double T) { return paths::rotation(w, T, 2, 400); }, Ts);
    EXPECT_EQ(fit.sign, GrowthSign::positive);
    EXPECT_NEAR(fit.slope, w / kPi, 1e-12);
    EXPECT_NEAR(fit.intercept, 0.0, 1e-10);
    // Off-grid horizons: the staircase keeps the slope near w / pi.
    std::vector<double> Us;
    for (int i = 1; i <= 40; ++i)
        Us.push_back(0.77 * i);
    auto loose = fit_index_growth([w](double T) { return paths::rotation(w, T, 2, 400); }, Us);
    EXPECT_GT(loose.slope, 0.9 * w / kPi);
    EXPECT_LT(loose.slope, 1.5 * w / kPi);
    for (const auto& s : loose.samples)
        EXPECT_GE(loose.margin(s), -1e-12);
    for (const auto& s : fit.samples)
        EXPECT_GE(fit.margin(s), -1e-12);
}

TEST(GrowthFit, ConstantIdentityIsIndefinite)
{
    auto fit = fit_index_growth([](double T) { return paths::constant_identity(T); }, {1.0, 2.0, 5.0});
    EXPECT_EQ(fit.sign, GrowthSign::indefinite);
    EXPECT_EQ(fit.slope, 0.0);
    EXPECT_EQ(fit.intercept, 0.0);
}

TEST(GrowthFit, SupportingLineBoundsEverySample)
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> ui(-3, 40);
    std::vector<GrowthSample> s;
    for (int i = 0; i < 50; ++i)
        s.push_back({0.5 * i + 0.1, HalfInteger::from_halves(ui(rng) + i)});
    s[0].mu = HalfInteger::from_halves(-2); // one sample of the other sign
    auto fit = supporting_line(s);
    double worst = 1e9;
    for (const auto& x : fit.samples)
        worst = std::min(worst, fit.margin(x));
    EXPECT_GE(worst, -1e-12);
    EXPECT_NEAR(worst, 0.0, 1e-9); // the line touches the samples
    EXPECT_EQ(fit.sign, GrowthSign::indefinite);
}

TEST(GrowthFit, RoundSphereReebArcsArePositive)
{
    auto s = surfaces::round_sphere();
    Vector z = sphere_point(3);
    auto gen = [&](double T) { return reduce_to_frame(s, reeb_arc(s, z, T)); };
    auto fit = fit_index_growth(gen, {1.0, 3.0, 7.0, 12.0, 20.0});
    EXPECT_EQ(fit.sign, GrowthSign::positive);
    EXPECT_GT(fit.slope, 0.0);
    EXPECT_NEAR(fit.slope, 4.0 / kPi, 0.2); // the reduced path is rotation(4t)
}

TEST(Convexity, RoundSphereRestrictedHessian)
{
    auto s = surfaces::round_sphere();
    auto c = convexity_certify(s, 500, 1);
    EXPECT_EQ(c.verdict, Verdict::certified);
    EXPECT_NEAR(c.lambda_min, 2.0, 1e-10);
    EXPECT_NEAR(c.max_alpha_xphi, 1.0, 1e-10);
    EXPECT_NEAR(c.predicted_slope, 2.0 / kPi, 1e-10);
    EXPECT_FALSE(c.witness);
}

TEST(Convexity, EllipsoidCertified)
{
    // Hessian 2 diag(1/r^2); the restricted minimum reaches 2 / r_max^2.
    auto c = convexity_certify(surfaces::ellipsoid(1.0, 2.0), 4000, 2);
    EXPECT_EQ(c.verdict, Verdict::certified);
    EXPECT_GE(c.lambda_min, 0.5 - 1e-10);
    EXPECT_LT(c.lambda_min, 0.52);
    EXPECT_NEAR(c.max_alpha_xphi, 1.0, 1e-10); // Euler: z . grad phi = 2 (phi + 1)
}

TEST(Convexity, NonConvexPerturbationRefusedWithWitness)
{
    auto s = surfaces::perturbed(0.2);
    auto c = convexity_certify(s, 4000, 3);
    EXPECT_EQ(c.verdict, Verdict::refused);
    ASSERT_TRUE(c.witness);
    const auto& w = *c.witness;
    EXPECT_LT(w.eigenvalue, 0.0);
    EXPECT_LT(std::abs(s.phi(w.point)), 1e-9);
    EXPECT_LT(std::abs(s.grad(w.point).dot(w.direction)), 1e-10);
    EXPECT_NEAR(w.direction.dot(s.hess(w.point) * w.direction), w.eigenvalue, 1e-10);
    EXPECT_GT(c.min_alpha_xphi, 0.0); // still star-shaped
    EXPECT_EQ(convexity_certify(surfaces::perturbed(0.1), 2000, 3).verdict, Verdict::certified);
}

TEST(Convexity, SamplerLandsOnSurface)
{
    auto s = surfaces::perturbed(0.15);
    auto smp = sphere_pushforward(s);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        Vector z = smp(rng);
        EXPECT_LT(std::abs(s.phi(z)), 1e-12);
        EXPECT_LT(z.norm(), 1.2); // the compact component
    }
}

TEST(IndexBound, RoundSphereHundredArcs)
{
    auto s = surfaces::round_sphere();
    auto cert = convexity_certify(s, 500, 1);
    auto arcs = random_reeb_arcs(s, 100, 50.0, 11);
    auto r = index_bound_check(s, cert, arcs);
    EXPECT_TRUE(r.holds()) << r.min_margin;
    for (std::size_t i = 0; i < arcs.size(); ++i)
        EXPECT_NEAR(r.arcs[i].T_R, arcs[i].horizon(), 1e-7); // alpha(R) = 1
}

TEST(IndexBound, EllipsoidArcs)
{
    auto s = surfaces::ellipsoid(1.0, 1.5);
    auto cert = convexity_certify(s, 2000, 1);
    auto r = index_bound_check(s, cert, random_reeb_arcs(s, 30, 50.0, 12));
    EXPECT_TRUE(r.holds()) << r.min_margin;
}

TEST(IndexBound, ZeroLengthArcIsVacuous)
{
    auto s = surfaces::round_sphere();
    auto cert = convexity_certify(s, 100, 1);
    FlowArc a;
    a.x0 = sphere_point(1);
    a.times = {0.0};
    a.states = {a.x0};
    a.variational = {Matrix::Identity(4, 4)};
    auto r = index_bound_check(s, cert, {a});
    EXPECT_EQ(r.arcs[0].mu, HalfInteger::from_int(0));
    EXPECT_NEAR(r.arcs[0].margin, 4.0, 1e-12);
}

TEST(IndexBound, RequiresCertifiedSurface)
{
    auto s = surfaces::perturbed(0.2);
    auto cert = convexity_certify(s, 2000, 3);
    EXPECT_THROW(index_bound_check(s, cert, {}), ValidationError);
}

TEST(CrossingPositivity, RoundSphere)
{
    auto s = surfaces::round_sphere();
    auto cert = convexity_certify(s, 100, 1);
    double required = cert.lambda_min / cert.max_alpha_xphi;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto path = reduce_to_frame(s, reeb_arc(s, sphere_point(seed), 10.0));
        auto r = crossing_positivity_check(path, required);
        EXPECT_TRUE(r.all_positive);
        EXPECT_TRUE(r.rate_ok());
        EXPECT_NEAR(r.min_rate, 4.0, 1e-4); // rotation(4t)
        EXPECT_EQ(r.count, 7u);               // t = 0, pi/2, ..., 3 pi
    }
}

TEST(CrossingPositivity, InitialCrossingIsPositive)
{
    auto s = surfaces::round_sphere();
    auto path = reduce_to_frame(s, reeb_arc(s, sphere_point(2), 0.5));
    auto cs = crossings(path);
    ASSERT_FALSE(cs.crossings.empty());
    EXPECT_NEAR(cs.crossings.front().time, 0.0, 1e-12);
    EXPECT_TRUE(cs.crossings.front().endpoint);
    EXPECT_EQ(cs.crossings.front().signature, 2);
}

TEST(CrossingPositivity, Ellipsoid)
{
    auto s = surfaces::ellipsoid(1.0, 1.5);
    auto cert = convexity_certify(s, 2000, 1);
    auto arcs = random_reeb_arcs(s, 5, 20.0, 13);
    for (const auto& a : arcs) {
        auto r = crossing_positivity_check(reduce_to_frame(s, a), cert.lambda_min / cert.max_alpha_xphi);
        EXPECT_TRUE(r.all_positive);
        EXPECT_TRUE(r.rate_ok());
    }
}

TEST(Structured, ZeroBlocksGiveIdentity)
{
    auto sp = integrate_structured(structured_zero(3), 5.0);
    for (const auto& m : sp.psi.samples())
        EXPECT_LT((m - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
    auto d = determinant_identity_check(sp, {0.0, 0.5, 1.0});
    EXPECT_EQ(d.homotopy, 0.0);
    for (const auto& m : sp.psi.samples())
        EXPECT_EQ((m - Matrix::Identity(6, 6)).determinant(), 0.0);
    auto c = structured_index_comparison(sp);
    EXPECT_EQ(c.diff, HalfInteger::from_int(0));
}

TEST(Structured, RotationOnlyDecouples)
{
    auto b = structured_zero(2);
    b.R = [](double t) { return Matrix(complex_structure(2) * (1.0 - std::cos(t))); };
    auto sp = integrate_structured(b, 12.0);
    for (std::size_t i = 0; i < sp.psi.size(); ++i) {
        const Matrix& m = sp.psi.samples()[i];
        EXPECT_LT((m.bottomRightCorner(2, 2) - Matrix::Identity(2, 2)).norm(), 1e-12);
        EXPECT_LT((m.topLeftCorner(2, 2) - sp.M.samples()[i]).norm(), 1e-8);
    }
    auto c = structured_index_comparison(sp);
    EXPECT_EQ(c.diff, HalfInteger::from_int(0));
    EXPECT_EQ(c.mu_sub, rs_index_kan(sp.M).value);
}

TEST(Structured, DecoupledDiffIsLowerBlockIndex)
{
    // Off-diagonal blocks zero: psi = diag(M, L) and the difference is the
    // index of L = [[alpha, 0], [beta, 1/alpha]].
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto b = structured_random_blocks(2, seed);
        b.X = b.Y = [](double) { return Vector(Vector::Zero(1)); };
        auto sp = integrate_structured(b, 10.0);
        auto c = structured_index_comparison(sp);
        EXPECT_LE(std::abs(c.diff.halves()), 1);
        EXPECT_EQ(c.diff, rs_index_kan(lower_block(sp.psi)).value);
    }
}

TEST(Structured, Seed42Invariants)
{
    auto sp = structured_random(2, 10.0, 42);
    auto inv = structured_invariants(sp);
    EXPECT_LT(inv.algebra, 1e-12);
    EXPECT_LT(inv.pattern, 1e-8);
    EXPECT_LT(inv.constraint, 1e-8);
    EXPECT_LT(inv.sub_block, 1e-8);
    EXPECT_LT(assemble(sp.blocks, 0.0).norm(), 1e-15);
}

TEST(Structured, ConstraintSignMatters)
{
    auto sp = structured_random(2, 10.0, 42);
    double flipped = 0.0;
    for (const auto& m : sp.psi.samples()) {
        Matrix w = m;
        w.row(3).head(2) *= -1.0; // (u, v) -> -(u, v)
        flipped = std::max(flipped, group_constraint_residual(w));
    }
    EXPECT_GT(flipped, 1e-2);
}

TEST(Structured, HigherDimensionInvariants)
{
    auto sp = structured_random(3, 8.0, 5);
    auto inv = structured_invariants(sp);
    EXPECT_LT(inv.algebra, 1e-12);
    EXPECT_LT(inv.constraint, 1e-8);
    EXPECT_LT(inv.sub_block, 1e-8);
    auto d = determinant_identity_check(sp, {0.0, 0.25, 0.5, 1.0});
    EXPECT_LT(d.homotopy_relative, 1e-8);
    EXPECT_LT(d.factored_relative, 1e-8);
}

TEST(Structured, DeterminantIdentitySeed42)
{
    auto sp = structured_random(2, 10.0, 42);
    auto d = determinant_identity_check(sp, {0.0, 0.5, 1.0});
    EXPECT_LT(d.homotopy, 1e-8);
    EXPECT_LT(d.factored, 1e-8);
    EXPECT_EQ(d.evaluations, 3 * sp.psi.size());
}

TEST(Structured, RejectsBadInput)
{
    EXPECT_THROW(structured_random(1, 1.0, 0), ValidationError);
    auto b = structured_zero(2);
    b.a = [](double t) { return 1.0 + t; };
    EXPECT_THROW(integrate_structured(b, 1.0), ValidationError);
}

TEST(Structured, DifferenceDoesNotGrow)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto sp = structured_random(2, 20.0, seed);
        auto full = structured_index_comparison(sp);
        auto half = structured_index_comparison(sp.truncated(10.0));
        EXPECT_LE(std::abs(full.diff.halves()), std::abs(half.diff.halves())) << seed;
        EXPECT_EQ(full.diff, rs_index_kan(lower_block(sp.psi)).value) << seed;
    }
}

TEST(Structured, TimeRescalingPreservesIndexAndCrossings)
{
    // f(t) A(t) with F' = f has solution psi(F(t)).
    auto f = [](double t) { return 1.0 + 0.5 * std::sin(t); };
    auto F = [](double t) { return t + 0.5 - 0.5 * std::cos(t); };
    auto b = structured_random_blocks(2, 7);
    const double T = 8.0;
    auto slow = integrate_structured(rescaled(b, f), T);
    auto ref = integrate_structured(b, F(T));
    EXPECT_EQ(structured_index_comparison(slow).mu_full, structured_index_comparison(ref).mu_full);
    EXPECT_EQ(rs_index_kan(slow.M).value, rs_index_kan(ref.M).value);
    auto cs = crossings(slow.M).crossings;
    auto cr = crossings(ref.M).crossings;
    ASSERT_EQ(cs.size(), cr.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        EXPECT_EQ(cs[i].signature, cr[i].signature);
        EXPECT_NEAR(F(cs[i].time), cr[i].time, 1e-5);
    }
}

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "sympath/return_map.hpp"

using namespace sympath;

namespace {

const double kPi = std::numbers::pi;
const double kIrrational = 1.0 / std::numbers::sqrt2 - 0.2;

std::vector<Vector> chart_points(const Chart& c, int count, std::uint64_t seed, double margin = 0.1)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(margin, 1.0 - margin);
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) {
        Vector s(c.dim());
        for (int k = 0; k < c.dim(); ++k)
            s(k) = c.box[k].first + (c.box[k].second - c.box[k].first) * ud(rng);
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomials)
{
    auto [x, w] = quad::gauss_legendre(5, -1.0, 2.0);
    double s = 0.0;
    for (int k = 0; k < 5; ++k)
        s += w[k] * std::pow(x[k], 9);
    EXPECT_NEAR(s, (std::pow(2.0, 10) - 1.0) / 10.0, 1e-11);
}

TEST(FirstReturn, KatokPageReturnsAtOne)
{
    auto m = models::katok_page(kIrrational);
    KatokParams p{3, {kIrrational}, true};
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        CVector w = katok::random_page_point(p, rng);
        auto r = first_return(m, to_real(w), {}, true);
        EXPECT_NEAR(r.T, 1.0, 1e-6);
        EXPECT_NEAR(r.action_lambda, r.T, 1e-8); // alpha(R) = 1
        EXPECT_LT((to_complex(r.tau_x) - katok::page_return_map(p, w)).norm(), 1e-8);
    }
}

TEST(FirstReturn, KatokFixedPoint)
{
    auto m = models::katok_page(kIrrational);
    KatokParams p{3, {kIrrational}, true};
    Vector x = to_real(katok::p0(p));
    auto r = first_return(m, x);
    EXPECT_LT((r.tau_x - x).norm(), 1e-8);
}

TEST(FirstReturn, EqualWeightsGiveIdentity)
{
    auto m = models::weighted_sphere(1.0, 1.0);
    for (const auto& s : chart_points(m.page, 20, 2)) {
        Vector x = m.page.point(s);
        auto r = first_return(m, x);
        EXPECT_LT((r.tau_x - x).norm(), 1e-8);
        EXPECT_NEAR(r.T, 2 * kPi, 1e-9);
    }
}

TEST(FirstReturn, WeightedSphereRotatesThePage)
{
    auto m = models::weighted_sphere(1.2, 0.8);
    Vector s(2);
    s << 0.5, 0.3;
    auto r = first_return(m, m.page.point(s));
    EXPECT_NEAR(r.T, 2 * kPi / 1.2, 1e-9);
    Vector s2(2);
    s2 << 0.5, 0.3 + 2 * kPi * 0.8 / 1.2;
    EXPECT_LT((r.tau_x - m.page.point(s2)).norm(), 1e-8);
}

TEST(FirstReturn, IsMinimalOnFinerScan)
{
    auto m = models::perturbed_sphere(0.1);
    for (const auto& s : chart_points(m.page, 5, 3)) {
        Vector x = m.page.point(s);
        auto r = first_return(m, x);
        IntegrateOptions o;
        o.surface = m.surface;
        o.output_dt = r.T / 2000;
        auto arc = integrate(m.field, x, r.T, o);
        for (std::size_t i = 1; i + 1 < arc.states.size(); ++i) {
            const Vector& a = arc.states[i - 1];
            const Vector& b = arc.states[i];
            bool crossing = a(1) < 0.0 && b(1) >= 0.0 && b(0) > 0.0 && arc.times[i] > 1e-6;
            ASSERT_FALSE(crossing) << "earlier crossing at " << arc.times[i];
        }
    }
}

TEST(FirstReturn, RejectsPointsOffThePage)
{
    auto m = models::weighted_sphere(1.2, 0.8);
    Vector x(4);
    x << -1, 0, 0, 0;
    EXPECT_THROW(first_return(m, x), DomainError);
    x << 0.6, 0.8, 0, 0;
    EXPECT_THROW(first_return(m, x), DomainError);
}

TEST(FirstReturn, ReturnTimeTendsToBindingPeriod)
{
    auto m = models::perturbed_sphere(0.1);
    double binding = binding_volume(m, 24).value; // int_B lambda
    Vector s(2);
    s << 1.0 - 1e-6, 0.4;
    EXPECT_NEAR(first_return(m, m.page.point(s)).T, binding, 1e-4);
}

TEST(FirstReturn, LinearisedReturnMapIsSymplectic)
{
    auto m = models::perturbed_sphere(0.1);
    for (const auto& s : chart_points(m.page, 4, 4))
        EXPECT_LT(return_map_symplectic_residual(m, s), 1e-6);
    auto k = models::katok_page(0.3);
    for (const auto& s : chart_points(k.page, 2, 5))
        EXPECT_LT(return_map_symplectic_residual(k, s), 1e-6);
}

TEST(Exactness, TrivialCases)
{
    auto k0 = models::katok_page(0.0);
    auto r0 = exactness_residual(k0, chart_points(k0.page, 3, 5), 1e-3);
    EXPECT_LT(r0.residual, 1e-6);
    EXPECT_FALSE(r0.inconclusive);
    auto d = models::disk_rotation();
    auto rd = exactness_residual(d, chart_points(d.page, 5, 6), 1e-3);
    EXPECT_LT(rd.residual, 1e-6);
}

TEST(Exactness, KatokPage)
{
    auto m = models::katok_page(0.3);
    auto r = exactness_residual(m, chart_points(m.page, 4, 7), 1e-3);
    EXPECT_LT(r.residual, 1e-4);
}

TEST(Exactness, NonConstantReturnTime)
{
    auto m = models::perturbed_sphere(0.15);
    auto pts = chart_points(m.page, 6, 8);
    double tmin = 1e9, tmax = -1e9;
    for (const auto& s : pts) {
        double t = first_return(m, m.page.point(s)).T;
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    EXPECT_GT(tmax - tmin, 1e-3);
    auto r = exactness_residual(m, pts, 1e-3);
    EXPECT_LT(r.residual, 1e-5);
}

TEST(Exactness, WrongFormIsDetected)
{
    auto m = models::perturbed_sphere(0.15);
    m.alpha = [](const Vector& x, const Vector& v) { return 0.6 * liouville(x, v); };
    auto r = exactness_residual(m, chart_points(m.page, 3, 9), 1e-3);
    EXPECT_GT(r.residual, 1e-2);
}

TEST(Volumes, RoundSphere)
{
    auto m = models::disk_rotation();
    auto v = manifold_volume(m, 16);
    EXPECT_NEAR(v.value, kPi * kPi, 1e-8);
    EXPECT_NEAR(page_volume(m, 16).value, kPi, 1e-9);
    EXPECT_NEAR(binding_volume(m, 16).value, kPi, 1e-9);
}

TEST(Volumes, WeightedSphereClosedForms)
{
    auto m = models::weighted_sphere(1.2, 0.8);
    EXPECT_NEAR(manifold_volume(m, 16).value, 4 * kPi * kPi / (1.2 * 0.8), 1e-8);
    EXPECT_NEAR(page_volume(m, 16).value, 2 * kPi / 0.8, 1e-9);
    EXPECT_NEAR(binding_volume(m, 16).value, 2 * kPi / 0.8, 1e-9);
}

TEST(Volumes, PerturbedSphereMatchesEnclosedVolume)
{
    // vol(M, lambda ^ d lambda) = 2 vol of the enclosed domain (Stokes).
    auto m = models::perturbed_sphere(0.0);
    EXPECT_NEAR(manifold_volume(m, 16).value, kPi * kPi, 1e-8);
}

TEST(Calabi, WeightedSphere)
{
    auto m = models::weighted_sphere(1.2, 0.8);
    auto r = calabi(m, 20000, 10);
    EXPECT_NEAR(r.mean_T, 2 * kPi / 1.2, 1e-8);
    EXPECT_LT(std::abs(r.cal_diff()), 3 * r.cal_combined_error());
    EXPECT_LT(std::abs(r.cal_diff()) / r.vol_M, 5e-3);
    EXPECT_LT(std::abs(r.boundary_diff()), 3 * r.boundary_combined_error() + 1e-9);
}

TEST(Calabi, UnperturbedIsVolumeOfPage)
{
    auto m = models::disk_rotation();
    auto r = calabi(m, 20000, 11);
    EXPECT_NEAR(r.mean_T, kPi, 1e-8);
    EXPECT_LT(std::abs(r.cal - r.vol_Sigma * kPi), 3 * r.mc_stderr + 1e-9);
}

TEST(Calabi, NonConstantReturnTime)
{
    auto m = models::perturbed_sphere(0.15);
    auto r = calabi(m, 4000, 12);
    EXPECT_GT(r.mc_stderr, 0.0);
    EXPECT_LT(std::abs(r.cal_diff()), 3 * r.cal_combined_error());
}

TEST(Calabi, TooFewSamplesRejected)
{
    auto m = models::weighted_sphere(1.2, 0.8);
    EXPECT_THROW(calabi(m, 1, 1), ValidationError);
    EXPECT_THROW(calabi(m, 3, 1), PrecisionError);
}

TEST(BoundaryVolume, KatokPage)
{
    for (double e : {0.0, 0.3}) {
        auto r = boundary_volume_identity(models::katok_page(e), 16);
        EXPECT_LT(r.relative(), 5e-3) << e << " " << r.vol_Sigma.value << " " << r.vol_B.value;
    }
}

TEST(BoundaryVolume, Disk)
{
    auto r = boundary_volume_identity(models::disk_rotation(), 16);
    EXPECT_NEAR(r.vol_Sigma.value, kPi, 1e-9);
    EXPECT_LT(std::abs(r.diff), 1e-9);
}

TEST(PeriodFormula, KatokFixedPoints)
{
    const double e = kIrrational;
    auto m = models::katok_page(e);
    auto g = models::katok_hamiltonian(e);
    KatokParams p{3, {e}, true};
    for (const CVector& w : {katok::p0(p), katok::q0(p)})
        for (int k = 1; k <= 3; ++k) {
            auto r = period_formula_check(m, g, to_real(w), k);
            EXPECT_NEAR(r.lhs, k, 1e-6);
            EXPECT_LT(std::abs(r.diff), 1e-6);
            EXPECT_TRUE(r.C_calibrated);
        }
}

TEST(PeriodFormula, DiskRotationBoundaryOrbit)
{
    auto m = models::disk_rotation();
    auto g = models::disk_rotation_hamiltonian();
    Vector x(4);
    x << 0, 0, 1, 0;
    auto r = period_formula_check(m, g, x, 1);
    EXPECT_NEAR(r.lhs, 2 * kPi * 0.5, 1e-6);
    EXPECT_NEAR(r.action, 0.0, 1e-9);
    EXPECT_LT(std::abs(r.diff), 1e-6);
}

TEST(PeriodFormula, NonPeriodicPointRejected)
{
    auto m = models::katok_page(kIrrational);
    auto g = models::katok_hamiltonian(kIrrational);
    EXPECT_THROW(period_formula_check(m, g, *g.calibrate, 1), ValidationError);
}

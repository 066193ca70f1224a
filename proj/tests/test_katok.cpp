#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "sympath/katok.hpp"

using namespace sympath;
using namespace sympath::katok;

namespace {

const double kIrrational = 1.0 / std::numbers::sqrt2 - 0.2;

KatokParams params(double e) { return KatokParams{3, {e}, true}; }

Vector random_vector(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> nd;
    Vector v(n);
    for (int k = 0; k < n; ++k)
        v(k) = nd(rng);
    return v;
}

} // namespace

TEST(Katok, RandomPointsLieOnSigma)
{
    std::mt19937_64 rng(1);
    for (auto p : {params(0.3), KatokParams{2, {0.2}, true}, KatokParams{5, {0.1, 0.25}, true}}) {
        for (int i = 0; i < 200; ++i) {
            CVector w = random_point(p, rng);
            EXPECT_LT(constraints(p, w).max(), 1e-13);
            EXPECT_LT(constraints(p, flow(p, w, 3.7)).max(), 1e-12);
        }
    }
}

TEST(Katok, BadParamsRejected)
{
    EXPECT_THROW(orbit_catalog(KatokParams{3, {1.2}, true}), ValidationError);
    EXPECT_THROW(orbit_catalog(KatokParams{3, {0.1, 0.2}, true}), ValidationError);
    KatokParams p = params(0.3);
    CVector w = CVector::Zero(4);
    w(0) = 1.0;
    EXPECT_THROW(require_on_sigma(p, w), ValidationError);
}

TEST(Katok, ClosedFormMatchesIntegrator)
{
    KatokParams p = params(0.3);
    std::mt19937_64 rng(2);
    CVector w = random_point(p, rng);
    IntegrateOptions o;
    o.output_dt = 0.05;
    FlowArc arc = integrate(reeb_field(p), to_real(w), 10.0, o);
    double sup = 0.0;
    for (std::size_t i = 0; i < arc.times.size(); ++i)
        sup = std::max(sup, (arc.states[i] - to_real(flow(p, w, arc.times[i]))).norm());
    EXPECT_LT(sup, 1e-7);
}

TEST(Katok, GenericPointDoesNotCloseAtOne)
{
    KatokParams p = params(0.3);
    std::mt19937_64 rng(3);
    CVector w = random_point(p, rng);
    CVector w1 = flow(p, w, 1.0);
    EXPECT_NEAR(std::abs(w1(0) - w(0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(w1(1) - w(1)), 0.0, 1e-12);
    EXPECT_GT((w1 - w).norm(), 1e-3);
}

TEST(Katok, CatalogHasFourOrbitsForThree)
{
    auto c = orbit_catalog(params(kIrrational));
    ASSERT_EQ(c.orbits.size(), 4u);
    EXPECT_TRUE(c.completeness_asserted);
    KatokParams p = params(kIrrational);
    for (const auto& o : c.orbits) {
        EXPECT_LT(constraints(p, o.point).max(), 1e-14);
        EXPECT_LT((flow(p, o.point, o.period) - o.point).norm(), 1e-12) << o.label;
    }
    EXPECT_NEAR(c.orbits[2].period, 1 / (1 + kIrrational), 1e-15);
    EXPECT_NEAR(c.orbits[3].period, 1 / (1 - kIrrational), 1e-15);
}

TEST(Katok, CatalogPeriodsMatchIntegration)
{
    KatokParams p = params(kIrrational);
    IntegrateOptions o;
    for (const auto& orb : orbit_catalog(p).orbits) {
        FlowArc arc = integrate(reeb_field(p), to_real(orb.point), orb.period, o);
        EXPECT_LT((arc.end() - to_real(orb.point)).norm(), 1e-9) << orb.label;
    }
}

TEST(Katok, EvenDimensionCatalogIsObservedOnly)
{
    auto c = orbit_catalog(KatokParams{2, {0.3}, true});
    EXPECT_EQ(c.orbits.size(), 2u);
    EXPECT_FALSE(c.completeness_asserted);
}

TEST(Katok, UnperturbedFlowIsPeriodic)
{
    KatokParams p = params(0.0);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        CVector w = random_point(p, rng);
        EXPECT_LT((flow(p, w, 1.0) - w).norm(), 1e-12);
    }
}

TEST(Katok, ScanFindsOnlyCatalogOrbits)
{
    KatokParams p = params(0.317);
    auto s = scan_for_returns(p, 200, 50.0, 1e-6, 5);
    EXPECT_EQ(s.returns_off_catalog, 0u);
    EXPECT_GT(s.min_return_distance, 1e-6);
    // Positive control: a catalog point is detected as returning.
    auto c = orbit_catalog(p);
    auto [t, d] = closest_return(p, c.orbits[2].point, 2.0, 0.5);
    EXPECT_LT(d, 1e-9);
    double ratio = t / c.orbits[2].period;
    EXPECT_NEAR(ratio, std::round(ratio), 1e-6);
}

TEST(Katok, PagePointsAndReturnMap)
{
    KatokParams p = params(0.3);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        CVector w = random_page_point(p, rng);
        EXPECT_NO_THROW(require_on_page(p, w));
        CVector img = page_return_map(p, w);
        EXPECT_NO_THROW(require_on_page(p, img));
        EXPECT_LT((img - flow(p, w, 1.0)).norm(), 1e-12);
    }
    EXPECT_LT((page_return_map(p, p0(p)) - p0(p)).norm(), 1e-15);
    EXPECT_LT((page_return_map(p, q0(p)) - q0(p)).norm(), 1e-15);
    CVector off = -p0(p); // on Sigma, but w_0 < 0
    EXPECT_THROW(page_return_map(p, off), ValidationError);
}

TEST(Katok, FirstReturnIsOne)
{
    KatokParams p = params(kIrrational);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        CVector w = random_page_point(p, rng);
        auto hit = section_crossing(reeb_field(p), to_real(w), page_section(), 3.0, {}, 1e-6);
        EXPECT_NEAR(hit.t, 1.0, 1e-6);
        EXPECT_LT((to_complex(hit.x) - page_return_map(p, w)).norm(), 1e-8);
    }
}

TEST(Katok, IrrationalRotationHasNoShortPeriods)
{
    KatokParams p = params(kIrrational);
    std::mt19937_64 rng(8);
    CVector w = random_page_point(p, rng);
    CVector img = w;
    for (int k = 1; k <= 1000; ++k) {
        img = page_return_map(p, img);
        ASSERT_GT((img - w).norm(), 1e-6) << k;
    }
}

TEST(Katok, PeriodicPointSearchFindsOnlyP0Q0)
{
    KatokParams p = params(kIrrational);
    auto found = periodic_point_search(p, 3);
    ASSERT_EQ(found.size(), 2u);
    for (const auto& f : found)
        EXPECT_LT(std::min((f.point - p0(p)).norm(), (f.point - q0(p)).norm()), 1e-6);
}

TEST(Katok, GeneratingHamiltonianIdentity)
{
    for (double e : {0.0, 0.3}) {
        KatokParams p = params(e);
        std::mt19937_64 rng(9);
        std::vector<CVector> pts;
        std::vector<Vector> vecs;
        for (int i = 0; i < 1000; ++i) {
            pts.push_back(random_point(p, rng));
            vecs.push_back(random_vector(rng, 8));
        }
        EXPECT_LT(generating_hamiltonian_residual(p, pts, vecs), 1e-8);
        if (e == 0.0)
            EXPECT_EQ(generating_hamiltonian(p, pts[0]), 0.0);
    }
}

TEST(Katok, GeneratorFlowIsTheReturnMap)
{
    KatokParams p = params(0.3);
    std::mt19937_64 rng(10);
    CVector w = random_page_point(p, rng);
    Vector x = to_real(w);
    Matrix a = Matrix::Zero(8, 8);
    for (int k = 0; k < 8; ++k) {
        Vector e = Vector::Zero(8);
        e(k) = 1.0;
        a.col(k) = twist_generator(p, e);
    }
    Vector y = (2 * std::numbers::pi * a).exp() * x;
    EXPECT_LT((to_complex(y) - page_return_map(p, w)).norm(), 1e-12);
}

TEST(Katok, DeltaIsCriticalAtFixedPointsAlongPage)
{
    KatokParams p = params(0.3);
    for (const CVector& w : {p0(p), q0(p)}) {
        Vector g = grad_generating_hamiltonian(p, to_real(w));
        Matrix t = tangent_basis(p, w);
        EXPECT_LT((t.transpose() * g).norm(), 1e-14);
    }
}

TEST(Katok, TangentBasisHasDimensionFive)
{
    KatokParams p = params(0.3);
    std::mt19937_64 rng(11);
    CVector w = random_point(p, rng);
    Matrix t = tangent_basis(p, w);
    EXPECT_EQ(t.cols(), 5);
    // Reeb direction is tangent.
    Vector r = reeb_field(p).eval(to_real(w), 0.0);
    EXPECT_LT((r - t * (t.transpose() * r)).norm(), 1e-12);
}

TEST(Katok, ContactFormIsFlowInvariant)
{
    KatokParams p = params(0.3);
    std::mt19937_64 rng(12);
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
        CVector w = random_point(p, rng);
        Matrix t = tangent_basis(p, w);
        double s = 0.37 * (i + 1);
        Vector x = to_real(w), y = to_real(flow(p, w, s));
        for (int c = 0; c < t.cols(); ++c) {
            Vector push = to_real(flow(p, to_complex(Vector(t.col(c))), s));
            sup = std::max(sup, std::abs(alpha_eps(p, y, push) - alpha_eps(p, x, t.col(c))));
        }
        // The closed-form field is Reeb for alpha_eps up to the 2 pi time unit.
        Vector r = reeb_field(p).eval(x, 0.0);
        EXPECT_NEAR(alpha_eps(p, x, r), 2 * std::numbers::pi, 1e-12);
        for (int c = 0; c < t.cols(); ++c)
            EXPECT_NEAR(dalpha_eps(p, x, r, t.col(c)), 0.0, 1e-12);
    }
    EXPECT_LT(sup, 1e-8);
}

TEST(Covering, PullbackMatchesPrintedForm)
{
    for (double e : {0.0, 0.2, -0.45}) {
        auto r = covering_check(e, 1000, 13);
        EXPECT_LT(r.constraint_residual, 1e-13);
        EXPECT_LT(r.antipodal_residual, 1e-15);
        EXPECT_LT(r.pullback_residual, 1e-12) << e;
    }
}

TEST(Covering, IsTwoToOne)
{
    std::mt19937_64 rng(14);
    Vector z = random_vector(rng, 4).normalized();
    CVector c = to_complex(z);
    CVector rot = c * std::polar(1.0, 0.3);
    EXPECT_GT((covering(rot) - covering(c)).norm(), 1e-3);
    EXPECT_LT((covering(-c) - covering(c)).norm(), 1e-15);
}

TEST(Weighted, ContactomorphismIdentity)
{
    std::mt19937_64 rng(15);
    Vector a(2);
    a << 1.2, 0.8;
    for (int i = 0; i < 1000; ++i) {
        Vector z = random_vector(rng, 4).normalized();
        auto r = weighted::contactomorphism_check(a, z, random_vector(rng, 4));
        EXPECT_LT(r.pullback_residual, 1e-9);
        EXPECT_LT(r.reeb_normalisation, 1e-12);
        EXPECT_LT(r.reeb_kernel, 1e-12);
        EXPECT_LT(r.sphere_residual, 1e-14);
    }
}

TEST(Weighted, EqualWeightsGiveIdentityMap)
{
    Vector a(2);
    a << 1.0, 1.0;
    Vector z(4);
    z << 0.6, 0.0, 0.0, 0.8;
    EXPECT_LT((weighted::psi(a, z) - z).norm(), 1e-15);
}

TEST(Weighted, RejectsBadInput)
{
    Vector a(2);
    a << 1.0, -1.0;
    Vector z(4);
    z << 1, 0, 0, 0;
    EXPECT_THROW(weighted::contactomorphism_check(a, z, z), ValidationError);
    a << 1.0, 1.0;
    EXPECT_THROW(weighted::contactomorphism_check(a, 2 * z, z), ValidationError);
}

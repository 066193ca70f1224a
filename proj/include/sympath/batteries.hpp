#pragma once

// Check batteries shared by the acceptance binary and the command-line suite.
// Every check records the measured value, the threshold it was held to and
// the method that produced it.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "certify.hpp"
#include "index.hpp"
#include "kan.hpp"
#include "katok.hpp"
#include "path.hpp"
#include "return_map.hpp"
#include "twist.hpp"

namespace sympath {

struct Check
{
    std::string id;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation; // how value is compared with tolerance
    std::string method;
    std::string detail;
    bool timing = false; // wall-clock checks are left out of deterministic reports
};

struct Battery
{
    int criterion = 0;
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool pass() const
    {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return !checks.empty();
    }
    std::size_t failures() const
    {
        std::size_t n = 0;
        for (const auto& c : checks)
            n += c.pass ? 0 : 1;
        return n;
    }
    void add(std::string id, bool pass, double value, double tol, std::string rel, std::string method,
             std::string detail = {})
    {
        checks.push_back({std::move(id), pass, value, tol, std::move(rel), std::move(method), std::move(detail)});
    }
    void add_timing(std::string id, double seconds_used, double limit)
    {
        checks.push_back({std::move(id), seconds_used < limit, seconds_used, limit, "<", "wall clock", "", true});
    }
};

struct BatteryOptions
{
    std::uint64_t seed = 1;
    double rtol = 1e-10;
    double atol = 1e-12;
    int trials = 0; // 0: the criterion's own count
};

namespace battery_detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline int trials_or(const BatteryOptions& o, int dflt) { return o.trials > 0 ? o.trials : dflt; }

inline IntegrateOptions integrate_options(const BatteryOptions& o)
{
    IntegrateOptions io;
    io.rtol = o.rtol;
    io.atol = o.atol;
    return io;
}

inline std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace battery_detail

/// Rotation loops t -> rotation(2 pi k t) on [0, 1] have index 2k.
inline Battery battery_index_exactness(const BatteryOptions&)
{
    using namespace battery_detail;
    Battery b{1, "index exactness"};
    auto t_all = Clock::now();
    for (int k = 1; k <= 5; ++k) {
        auto t0 = Clock::now();
        auto est = rs_index(paths::rotation(2 * std::numbers::pi * k, 1.0));
        double secs = since(t0);
        b.add("rotation_loop_k" + std::to_string(k), est.value == HalfInteger::from_int(2 * k), est.value.value(),
              2.0 * k, "==", to_string(est.method));
        b.add_timing("rotation_loop_k" + std::to_string(k) + "_runtime", secs, 1.0);
    }
    b.seconds = since(t_all);
    return b;
}

/// Crossing-form and KAN-winding indices agree on seeded random paths in Sp(2).
inline Battery battery_method_agreement(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{2, "method agreement"};
    const int n = trials_or(o, 500);
    std::mt19937_64 rng(o.seed + 2024);
    int agree = 0;
    std::string first_bad;
    auto t0 = Clock::now();
    for (int i = 0; i < n; ++i) {
        auto p = paths::random_lie(rng, 2, 6, 3.0, 1.5);
        bool same = rs_index(p).value == rs_index_kan(p).value;
        agree += same ? 1 : 0;
        if (!same && first_bad.empty())
            first_bad = "first disagreement at trial " + std::to_string(i);
    }
    b.seconds = since(t0);
    b.add("agreement", agree == n, agree, n, "==", "crossing_form vs kan_winding", first_bad);
    b.add_timing("runtime", b.seconds, 30.0);
    return b;
}

/// Mean index of the k-th iterate against k times the mean index. The
/// two-point estimator is exact when the sampled iteration counts are
/// multiples of the rotation denominator, which holds for the generators used.
inline Battery battery_mean_index(const BatteryOptions&)
{
    using namespace battery_detail;
    Battery b{3, "mean-index iteration"};
    auto t0 = Clock::now();
    const double pi = std::numbers::pi;
    for (double rate : {pi, 2 * pi, 4 * pi / 3}) {
        auto gen = paths::rotation(rate, 1.0);
        double base = mean_index(gen, 12).value;
        double worst = 0.0;
        for (int k = 1; k <= 20; ++k) {
            double it = mean_index(iterate_period(gen, k), 12).value;
            worst = std::max(worst, std::abs(it - k * base));
        }
        b.add("rotation_rate_" + num(rate), worst < 1e-8, worst, 1e-8, "<",
              "two-point mean index over 12 iterations, k <= 20", "Delta = " + num(base));
    }
    b.seconds = since(t0);
    return b;
}

/// Katok n = 3, eps = 0.317: four catalogued orbits, none found off the catalog.
inline Battery battery_katok_orbits(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{4, "Katok orbit count"};
    auto t0 = Clock::now();
    const double e = 0.317;
    KatokParams p{3, {e}, true};
    auto cat = katok::orbit_catalog(p);
    b.add("orbit_count", cat.orbits.size() == 4, static_cast<double>(cat.orbits.size()), 4, "==",
          "closed-form catalog");
    std::vector<double> expect{1.0, 1.0, 1 / (1 + e), 1 / (1 - e)};
    double worst = 0.0, closure = 0.0;
    for (std::size_t i = 0; i < cat.orbits.size() && i < 4; ++i) {
        worst = std::max(worst, std::abs(cat.orbits[i].period - expect[i]));
        closure = std::max(closure, (katok::flow(p, cat.orbits[i].point, cat.orbits[i].period) - cat.orbits[i].point)
                                        .norm());
    }
    b.add("periods", worst < 1e-9, worst, 1e-9, "<", "closed-form periods vs {1, 1, 1/1.317, 1/0.683}");
    b.add("closure", closure < 1e-9, closure, 1e-9, "<", "closed-form flow over one period");
    const int n = trials_or(o, 1000);
    auto scan = katok::scan_for_returns(p, n, 50.0, 1e-6, o.seed + 4);
    b.add("scan_off_catalog", scan.returns_off_catalog == 0, static_cast<double>(scan.returns_off_catalog), 0, "==",
          "closest return over t <= 50 at " + std::to_string(n) + " random points",
          "min off-catalog return distance " + num(scan.min_return_distance));
    b.seconds = since(t0);
    return b;
}

/// Katok page: first return time 1 and fixed points {p0, q0} up to period 20.
inline Battery battery_katok_return(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{5, "Katok return map"};
    auto t0 = Clock::now();
    const double e = 1.0 / std::numbers::sqrt2 - 0.2;
    KatokParams p{3, {e}, true};
    auto m = models::katok_page(e);
    std::mt19937_64 rng(o.seed + 5);
    double worst = 0.0, image = 0.0;
    const int n = trials_or(o, 100);
    auto io = integrate_options(o);
    for (int i = 0; i < n; ++i) {
        CVector w = katok::random_page_point(p, rng);
        auto r = first_return(m, to_real(w), io);
        worst = std::max(worst, std::abs(r.T - 1.0));
        image = std::max(image, (to_complex(r.tau_x) - katok::page_return_map(p, w)).norm());
    }
    b.add("return_time", worst < 1e-6, worst, 1e-6, "<", "numerical first return, " + std::to_string(n) + " points");
    b.add("return_image", image < 1e-6, image, 1e-6, "<", "numerical vs closed-form return map");
    auto found = katok::periodic_point_search(p, 20, 1e-2);
    double off = 0.0;
    for (const auto& f : found)
        off = std::max(off, std::min((f.point - katok::p0(p)).norm(), (f.point - katok::q0(p)).norm()));
    bool both = found.size() == 2 && off < 1e-6;
    b.add("fixed_points", both, static_cast<double>(found.size()), 2, "==",
          "grid 1e-2 search with polishing, periods <= 20", "max distance to {p0, q0} " + num(off));
    b.seconds = since(t0);
    return b;
}

/// iota_X d alpha_eps + d(H^-1 Delta) = 0 on tangent vectors of Sigma.
inline Battery battery_generating_hamiltonian(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{6, "generating Hamiltonian"};
    auto t0 = Clock::now();
    KatokParams p{3, {0.3}, true};
    std::mt19937_64 rng(o.seed + 6);
    std::normal_distribution<double> nd;
    std::vector<CVector> pts;
    std::vector<Vector> vecs;
    const int n = trials_or(o, 1000);
    for (int i = 0; i < n; ++i) {
        CVector w = katok::random_point(p, rng);
        Matrix tb = katok::tangent_basis(p, w);
        Vector c(tb.cols());
        for (Eigen::Index j = 0; j < c.size(); ++j)
            c(j) = nd(rng);
        pts.push_back(w);
        vecs.push_back(tb * c);
    }
    double r = katok::generating_hamiltonian_residual(p, pts, vecs);
    b.add("identity_residual", r < 1e-8, r, 1e-8, "<", "closed-form gradients on tangent vectors");
    b.seconds = since(t0);
    return b;
}

/// Index bound mu >= slope T_R - 4 and crossing positivity on convex surfaces.
inline Battery battery_convexity(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{7, "convexity bound"};
    auto t0 = Clock::now();
    const int n = trials_or(o, 100);
    for (auto s : {surfaces::round_sphere(), surfaces::ellipsoid(1.0, 1.5)}) {
        auto cert = convexity_certify(s, 2000, o.seed + 7);
        b.add(s.name + "_certified", cert.verdict == Verdict::certified, cert.lambda_min, 0.0, ">",
              "restricted Hessian at 2000 samples");
        if (cert.verdict != Verdict::certified)
            continue;
        auto arcs = random_reeb_arcs(s, n, 50.0, o.seed + 70);
        auto rep = index_bound_check(s, cert, arcs);
        b.add(s.name + "_index_bound", rep.holds(), rep.min_margin, 0.0, ">=", "crossing_form index on reduced arcs",
              "slope " + num(rep.predicted_slope) + ", " + std::to_string(n) + " arcs, T_R <= 50");
        double required = cert.lambda_min / cert.max_alpha_xphi;
        std::size_t count = 0, bad = 0;
        double min_rate = std::numeric_limits<double>::infinity();
        for (const auto& arc : arcs) {
            if (arc.times.size() < 2)
                continue;
            auto cp = crossing_positivity_check(reduce_to_frame(s, arc), required);
            count += cp.count;
            bad += cp.all_positive ? 0 : 1;
            min_rate = std::min(min_rate, cp.min_rate);
        }
        b.add(s.name + "_crossings_positive", bad == 0, static_cast<double>(bad), 0, "==",
              "signature of crossing forms", std::to_string(count) + " crossings, min rate " + num(min_rate) +
                                                 " vs required " + num(required));
    }
    b.seconds = since(t0);
    return b;
}

/// Calabi and volume identities on the weighted S^3 page.
inline Battery battery_calabi(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{8, "Calabi and volume identities"};
    auto t0 = Clock::now();
    auto m = models::weighted_sphere(1.2, 0.8);
    IntegrateOptions io;
    io.rtol = 1e-8;
    io.atol = 1e-10;
    const std::size_t n = static_cast<std::size_t>(trials_or(o, 1000000));
    auto r = calabi(m, n, o.seed + 8, io);
    double cal_err = 3 * r.cal_combined_error();
    b.add("cal_vs_volume", std::abs(r.cal_diff()) <= cal_err, std::abs(r.cal_diff()), cal_err, "<=",
          "Monte Carlo int T omega^2 vs quadrature vol(M)", std::to_string(n) + " samples");
    b.add("cal_vs_volume_relative", std::abs(r.cal_diff()) / r.vol_M < 5e-3, std::abs(r.cal_diff()) / r.vol_M, 5e-3,
          "<", "relative difference");
    double bd_err = 3 * r.boundary_combined_error();
    b.add("page_vs_binding", std::abs(r.boundary_diff()) <= bd_err, std::abs(r.boundary_diff()), bd_err, "<=",
          "quadrature vol(Sigma, omega) vs vol(B, alpha_B)");
    double rel = std::abs(r.boundary_diff()) / std::abs(r.vol_B);
    b.add("page_vs_binding_relative", rel < 5e-3, rel, 5e-3, "<", "relative difference");
    b.seconds = since(t0);
    b.add_timing("runtime", b.seconds, 120.0);
    return b;
}

/// int beta^* alpha = A_{H^{#k}} + k C at Katok fixed points and the disk rotation.
inline Battery battery_period_formula(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{9, "period formula"};
    auto t0 = Clock::now();
    const double e = 1.0 / std::numbers::sqrt2 - 0.2;
    auto m = models::katok_page(e);
    auto g = models::katok_hamiltonian(e);
    KatokParams p{3, {e}, true};
    auto io = integrate_options(o);
    double worst = 0.0;
    for (const CVector& w : {katok::p0(p), katok::q0(p)})
        for (int k = 1; k <= 3; ++k)
            worst = std::max(worst, std::abs(period_formula_check(m, g, to_real(w), k, io).diff));
    b.add("katok_fixed_points", worst < 1e-6, worst, 1e-6, "<", "closed orbit period vs action + kC, k = 1..3");
    auto d = models::disk_rotation();
    auto dg = models::disk_rotation_hamiltonian();
    Vector x(4);
    x << 0, 0, 1, 0;
    double dd = std::abs(period_formula_check(d, dg, x, 1, io).diff);
    b.add("disk_rotation", dd < 1e-6, dd, 1e-6, "<", "boundary orbit of H = pi r^2");
    b.seconds = since(t0);
    return b;
}

/// The D*S^1 twist collar of g(s) = s^2/2 and its extension.
struct CodiskExtension
{
    CollarHamiltonian collar;
    std::vector<BoundarySample> samples;
    CollarSplit split;
    ExtensionBundle bundle;
};

inline CodiskExtension codisk_extension(double delta1, std::uint64_t seed)
{
    auto c = twist_collar(polynomial_twist({0.5}), 0.5);
    auto smp = boundary_samples(c.boundary, 16, seed);
    auto s = split_collar(c, smp);
    auto e = extend_hamiltonian(s, default_extension_params(s, smp, delta1), smp);
    return {c, smp, s, e};
}

/// Linearity, F positivity with the delta1 ladder, and the field formula.
inline Battery battery_extension(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{10, "extension construction"};
    auto t0 = Clock::now();
    auto ce = codisk_extension(0.1, o.seed + 10);
    const auto& e = ce.bundle;
    bool exact = true;
    for (const auto& x : ce.samples)
        for (double r : {1.1, 1.1 + 1e-12, 1.25, 2.0, 7.5, 1e3})
            exact = exact && e.value(r, x.b, x.t) == e.params.A * (r - 1) + e.params.C &&
                    e.F(r, x.b, x.t) == e.params.A;
    b.add("exact_linearity", exact, exact ? 0.0 : 1.0, 0.0, "==", "exact evaluation for r >= 1 + delta1");
    auto rc = reeb_coefficient(e, ce.samples, 3);
    b.add("min_F_positive", rc.min_F > 0, rc.min_F, 0.0, ">", "F on a radial grid of the cylindrical end");
    std::string ladder;
    for (auto& [d, f] : rc.ladder)
        ladder += "(" + num(d) + ", " + num(f) + ") ";
    b.add("ladder_monotone", rc.ladder_monotone, rc.ladder.back().second - rc.ladder.front().second, 0.0, ">=",
          "min_F along delta1 = 0.1, 0.05, 0.025", ladder);
    auto xh = xh_formula_check(e, ce.samples);
    b.add("field_formula_circle", xh.sup_error < 1e-5, xh.sup_error, 1e-5, "<",
          "printed decomposition vs I grad H^ in the plane");
    auto k3 = katok_collar_s3(0.3);
    auto s3 = boundary_samples(k3.boundary, 12, o.seed + 11);
    auto sp3 = split_collar(k3, s3);
    auto e3 = extend_hamiltonian(sp3, default_extension_params(sp3, s3, 0.1), s3);
    auto xh3 = xh_formula_check(e3, s3);
    b.add("field_formula_sphere", xh3.sup_error < 1e-5, xh3.sup_error, 1e-5, "<",
          "printed decomposition vs I grad H^ in C^2");
    b.seconds = since(t0);
    return b;
}

/// Boundary-region winding >= (inf F) k for k <= 20.
inline Battery battery_winding(const BatteryOptions& o)
{
    using namespace battery_detail;
    Battery b{11, "winding bound"};
    auto t0 = Clock::now();
    auto ce = codisk_extension(0.1, o.seed + 10);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 20; ++k) {
        auto w = winding_lower_bound(ce.bundle, k, ce.samples, 12, o.seed + 100 + k);
        worst = std::min(worst, w.min_winding - w.A_bound);
    }
    b.add("winding_margin", worst >= -1e-6, worst, -1e-6, ">=", "integrated Reeb-time displacement, k = 1..20");
    b.seconds = since(t0);
    return b;
}

/// Twist verdict of the Dehn-twist extension flips exactly at k = l.
inline Battery battery_dehn(const BatteryOptions&)
{
    using namespace battery_detail;
    Battery b{12, "twist dichotomy"};
    auto t0 = Clock::now();
    for (int ell : {1, 2, 3}) {
        int wrong = 0;
        std::string verdicts;
        for (int k = 1; k <= 5; ++k) {
            auto v = dehn_twist_verdict(DehnTwistProfile{k, ell, 0.5});
            wrong += v.twist.twist == (k <= ell) ? 0 : 1;
            verdicts += v.twist.twist ? "T" : "-";
        }
        b.add("ell_" + std::to_string(ell), wrong == 0, wrong, 0, "==", "boundary twist predicate, k = 1..5",
              "verdicts " + verdicts);
    }
    b.seconds = since(t0);
    return b;
}

/// Simple periodic points of every period k <= 13 for g(s) = s^2/2.
inline Battery battery_periodic_points(const BatteryOptions&)
{
    using namespace battery_detail;
    Battery b{13, "periodic points"};
    auto t0 = Clock::now();
    auto cat = periodic_point_search(polynomial_twist({0.5}), 13);
    std::vector<bool> seen(14, false);
    double worst = 0.0;
    for (const auto& p : cat) {
        seen[p.k] = true;
        worst = std::max(worst, p.residual);
    }
    int missing = 0;
    for (int k = 1; k <= 13; ++k)
        missing += seen[k] ? 0 : 1;
    b.add("every_period", missing == 0, missing, 0, "==", "rational levels j/k of g'",
          std::to_string(cat.size()) + " levels");
    b.add("residual", worst < 1e-9, worst, 1e-9, "<", "|tau^k(x) - x|");
    b.seconds = since(t0);
    return b;
}

/// Determinant identities and non-growth of mu(psi) - mu(M) on structured paths.
/// Trials are seeded seed * 1000003 + i; the index difference is compared on [0, T/2] and [0, T].
inline Battery structured_trials(int dim_n, double T, int n, std::uint64_t seed)
{
    using namespace battery_detail;
    Battery b{14, "structured paths"};
    auto t0 = Clock::now();
    std::vector<double> grid{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0};
    double hom = 0.0, fac = 0.0;
    int grew = 0, failed = 0;
    std::string first;
    for (int i = 0; i < n; ++i) {
        std::uint64_t trial_seed = seed * 1000003ULL + static_cast<std::uint64_t>(i);
        try {
            auto sp = structured_random(dim_n, T, trial_seed);
            auto d = determinant_identity_check(sp, grid);
            hom = std::max(hom, d.homotopy_relative);
            fac = std::max(fac, d.factored_relative);
            auto full = structured_index_comparison(sp);
            auto half = structured_index_comparison(sp.truncated(T / 2));
            if (std::abs(full.diff.halves()) > std::abs(half.diff.halves())) {
                ++grew;
                if (first.empty())
                    first = "first growth at trial " + std::to_string(i);
            }
        } catch (const Error& ex) {
            ++failed;
            if (first.empty())
                first = std::string("trial ") + std::to_string(i) + ": " + ex.what();
        }
    }
    b.add("determinant_homotopy", hom < 1e-8 && failed == 0, hom, 1e-8, "<",
          "relative |det(psi_s - id) - det(psi_0 - id)|, s in {-2..3}");
    b.add("determinant_factored", fac < 1e-8 && failed == 0, fac, 1e-8, "<",
          "relative |det(psi - id) - det(M - id)(alpha - 1)(1/alpha - 1)|");
    b.add("difference_non_growing", grew == 0 && failed == 0, grew, 0, "==",
          "spectral_flow |mu(psi) - mu(M)| on [0, T] vs [0, T/2], T = " + num(T),
          std::to_string(n) + " trials, " + std::to_string(failed) + " integration failures. " + first);
    b.seconds = since(t0);
    return b;
}

inline Battery battery_structured(const BatteryOptions& o)
{
    return structured_trials(2, 20.0, battery_detail::trials_or(o, 500), o.seed);
}

using BatteryFn = Battery (*)(const BatteryOptions&);

inline const std::vector<BatteryFn>& acceptance_batteries()
{
    static const std::vector<BatteryFn> all{
        battery_index_exactness, battery_method_agreement, battery_mean_index,     battery_katok_orbits,
        battery_katok_return,    battery_generating_hamiltonian, battery_convexity, battery_calabi,
        battery_period_formula,  battery_extension,       battery_winding,        battery_dehn,
        battery_periodic_points, battery_structured};
    return all;
}

} // namespace sympath

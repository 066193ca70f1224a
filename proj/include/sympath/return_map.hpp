#pragma once

// First-return maps to global hypersurfaces of section and the integral
// identities they satisfy: tau^* lambda = lambda + dT, the Calabi/volume
// identity, the boundary volume identity and the period formula.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "flow.hpp"
#include "katok.hpp"
#include "reeb.hpp"

namespace sympath {

using OneForm = std::function<double(const Vector& x, const Vector& v)>;
using TwoForm = std::function<double(const Vector& x, const Vector& u, const Vector& v)>;

/// A parametrised piece of M: s in a coordinate box maps to a point.
struct Chart
{
    std::function<Vector(const Vector&)> point;
    std::vector<std::pair<double, double>> box;
    int dim() const { return static_cast<int>(box.size()); }
};

/// Contact manifold with a page of a global section and its binding.
struct PageModel
{
    std::string name;
    std::string convention;
    VectorFieldSpec field; // Reeb field of alpha
    SectionSpec section;
    OneForm alpha;
    TwoForm dalpha;
    Chart page;
    Chart binding;
    Chart manifold;
    std::optional<HypersurfaceSpec> surface;
    double t_max = 50.0;
};

struct ReturnSample
{
    Vector x;
    Vector tau_x;
    double T = 0.0;
    double action_lambda = 0.0;
};

inline IntegrateOptions model_options(const PageModel& m, IntegrateOptions o)
{
    if (m.surface && !o.surface)
        o.surface = m.surface;
    return o;
}

/// Minimal positive return to the page; crossings against the orientation
/// are skipped by section_crossing itself.
inline ReturnSample first_return(const PageModel& m, const Vector& x, const IntegrateOptions& opts = {},
                                 bool with_action = false)
{
    if (m.section.interior && !m.section.interior(x))
        throw DomainError("start point is not interior to the page");
    if (std::abs(m.section.g(x)) > 1e-8)
        throw DomainError("start point is off the section");
    IntegrateOptions o = model_options(m, opts);
    double t_min = 1e-9 * std::max(1.0, m.t_max);
    SectionHit hit = section_crossing(m.field, x, m.section, m.t_max, o, t_min);
    ReturnSample s{x, hit.x, hit.t, 0.0};
    if (with_action) {
        o.action_density = m.alpha;
        s.action_lambda = integrate(m.field, x, hit.t, o).total_action();
    }
    return s;
}

namespace quad {

/// Gauss-Legendre nodes and weights on [a, b] (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b)
{
    if (n < 1)
        throw ValidationError("quadrature needs at least one node");
    Matrix j = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double beta = k / std::sqrt(4.0 * k * k - 1.0);
        j(k, k - 1) = j(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(j);
    std::vector<double> x(n), w(n);
    for (int k = 0; k < n; ++k) {
        double v0 = es.eigenvectors()(0, k);
        x[k] = 0.5 * (a + b) + 0.5 * (b - a) * es.eigenvalues()(k);
        w[k] = (b - a) * v0 * v0;
    }
    return {x, w};
}

/// Partial derivatives of a chart by central differences.
inline std::vector<Vector> tangents(const Chart& c, const Vector& s, double h = 1e-6)
{
    std::vector<Vector> t;
    for (int i = 0; i < c.dim(); ++i) {
        Vector sp = s, sm = s;
        sp(i) += h;
        sm(i) -= h;
        t.push_back((c.point(sp) - c.point(sm)) / (2 * h));
    }
    return t;
}

/// (d alpha)^p on 2p vectors, p = 1, 2.
inline double power_of_two_form(const TwoForm& w, const Vector& x, const std::vector<Vector>& v)
{
    if (v.size() == 2)
        return w(x, v[0], v[1]);
    if (v.size() == 4)
        return 2.0 * (w(x, v[0], v[1]) * w(x, v[2], v[3]) - w(x, v[0], v[2]) * w(x, v[1], v[3]) +
                      w(x, v[0], v[3]) * w(x, v[1], v[2]));
    throw ValidationError("only 2- and 4-dimensional pages are supported");
}

/// alpha ^ (d alpha)^p on 2p + 1 vectors by expansion along alpha.
inline double contact_volume_form(const OneForm& a, const TwoForm& w, const Vector& x, const std::vector<Vector>& v)
{
    if (v.size() == 1)
        return a(x, v[0]);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::vector<Vector> rest;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (k != i)
                rest.push_back(v[k]);
        s += (i % 2 == 0 ? 1.0 : -1.0) * a(x, v[i]) * power_of_two_form(w, x, rest);
    }
    return s;
}

struct Estimate
{
    double value = 0.0;
    double error = 0.0; // |Q_n - Q_{n/2}|
    int nodes = 0;      // per axis
};

/// Tensor Gauss-Legendre integral of |density| over the chart box.
inline double tensor_integral(const Chart& c, int n, const std::function<double(const Vector&)>& density)
{
    std::vector<std::vector<double>> xs, ws;
    for (auto [a, b] : c.box) {
        auto [x, w] = gauss_legendre(n, a, b);
        xs.push_back(x);
        ws.push_back(w);
    }
    const int d = c.dim();
    std::vector<int> idx(d, 0);
    double total = 0.0;
    Vector s(d);
    while (true) {
        double wt = 1.0;
        for (int i = 0; i < d; ++i) {
            s(i) = xs[i][idx[i]];
            wt *= ws[i][idx[i]];
        }
        total += wt * std::abs(density(s));
        int k = 0;
        while (k < d && ++idx[k] == n)
            idx[k++] = 0;
        if (k == d)
            break;
    }
    return total;
}

inline Estimate integral_with_error(const Chart& c, int n, const std::function<double(const Vector&)>& density)
{
    double fine = tensor_integral(c, n, density);
    double coarse = tensor_integral(c, std::max(1, n / 2), density);
    return {fine, std::abs(fine - coarse), n};
}

} // namespace quad

/// vol(Sigma, omega^n) with omega = d alpha on the page.
inline quad::Estimate page_volume(const PageModel& m, int n = 24)
{
    return quad::integral_with_error(m.page, n, [&](const Vector& s) {
        return quad::power_of_two_form(m.dalpha, m.page.point(s), quad::tangents(m.page, s));
    });
}

/// vol(B, alpha_B ^ (d alpha_B)^{n-1}).
inline quad::Estimate binding_volume(const PageModel& m, int n = 24)
{
    return quad::integral_with_error(m.binding, n, [&](const Vector& s) {
        return quad::contact_volume_form(m.alpha, m.dalpha, m.binding.point(s), quad::tangents(m.binding, s));
    });
}

/// vol(M, alpha ^ (d alpha)^n).
inline quad::Estimate manifold_volume(const PageModel& m, int n = 24)
{
    return quad::integral_with_error(m.manifold, n, [&](const Vector& s) {
        return quad::contact_volume_form(m.alpha, m.dalpha, m.manifold.point(s), quad::tangents(m.manifold, s));
    });
}

struct ExactnessReport
{
    double residual = 0.0;        // sup |tau^* lambda - lambda - dT| at step h
    double residual_coarse = 0.0; // same at step 2h
    double discretisation = 0.0;  // |residual_coarse - residual| / 3
    bool inconclusive = false;
    std::size_t points = 0;
    double h = 0.0;
};

struct ReturnLinearisation
{
    ReturnSample sample;
    std::vector<Vector> pushed; // D tau applied to the supplied page tangents
    std::vector<double> dT;     // dT applied to the same tangents
};

/// D tau(v) = D Fl_T(v) + R(tau x) dT(v) with dT(v) = -dg(D Fl_T v) / dg(R).
inline ReturnLinearisation linearised_return(const PageModel& m, const Vector& x, const std::vector<Vector>& tangents,
                                             const IntegrateOptions& opts = {})
{
    ReturnLinearisation out;
    out.sample = first_return(m, x, opts);
    IntegrateOptions ov = model_options(m, opts);
    ov.variational = true;
    FlowArc arc = integrate(m.field, x, out.sample.T, ov);
    const Matrix& dfl = arc.variational.back();
    Vector tx = out.sample.tau_x;
    Vector rt = m.field.eval(tx, out.sample.T);
    Vector dg = m.section.g_grad ? m.section.g_grad(tx) : fd_gradient(m.section.g, tx);
    for (const auto& v : tangents) {
        Vector w = dfl * v;
        double dt = -dg.dot(w) / dg.dot(rt);
        out.pushed.push_back(w + rt * dt);
        out.dT.push_back(dt);
    }
    return out;
}

/// sup |omega(D tau u, D tau v) - omega(u, v)| over pairs of chart tangents.
inline double return_map_symplectic_residual(const PageModel& m, const Vector& s, const IntegrateOptions& opts = {})
{
    Vector x = m.page.point(s);
    auto tan = quad::tangents(m.page, s, 1e-7);
    auto lin = linearised_return(m, x, tan, opts);
    double sup = 0.0;
    for (std::size_t i = 0; i < tan.size(); ++i)
        for (std::size_t j = i + 1; j < tan.size(); ++j)
            sup = std::max(sup, std::abs(m.dalpha(lin.sample.tau_x, lin.pushed[i], lin.pushed[j]) -
                                         m.dalpha(x, tan[i], tan[j])));
    return sup;
}

/// Checks tau^* lambda = lambda + dT at the given chart points. tau^* lambda
/// pushes chart tangents through the linearised return map
/// D tau(v) = D Fl_T(v) + R(tau x) dT(v), dT(v) = -dg(D Fl_T v) / dg(R);
/// the independent dT is a central difference of the return time.
inline ExactnessReport exactness_residual(const PageModel& m, const std::vector<Vector>& chart_points, double h,
                                          double tol = 1e-6, const IntegrateOptions& opts = {})
{
    ExactnessReport rep;
    rep.h = h;
    rep.points = chart_points.size();
    auto T_at = [&](const Vector& s) { return first_return(m, m.page.point(s), opts).T; };
    auto residual_at = [&](const Vector& s, double step) {
        Vector x = m.page.point(s);
        auto tan = quad::tangents(m.page, s, 1e-7);
        auto lin = linearised_return(m, x, tan, opts);
        double sup = 0.0;
        for (int i = 0; i < m.page.dim(); ++i) {
            Vector sp = s, sm = s;
            sp(i) += step;
            sm(i) -= step;
            double dt_fd = (T_at(sp) - T_at(sm)) / (2 * step);
            double lhs = m.alpha(lin.sample.tau_x, lin.pushed[i]) - m.alpha(x, tan[i]);
            sup = std::max(sup, std::abs(lhs - dt_fd));
        }
        return sup;
    };
    for (const auto& s : chart_points) {
        rep.residual = std::max(rep.residual, residual_at(s, h));
        rep.residual_coarse = std::max(rep.residual_coarse, residual_at(s, 2 * h));
    }
    rep.discretisation = std::abs(rep.residual_coarse - rep.residual) / 3.0;
    rep.inconclusive = rep.residual > tol && rep.discretisation > 0.5 * rep.residual;
    return rep;
}

struct CalabiReport
{
    double cal = 0.0;       // int T omega^n, Monte Carlo
    double mc_stderr = 0.0;
    double integration_error = 0.0;
    double vol_M = 0.0;
    double vol_M_error = 0.0;
    double vol_Sigma = 0.0;
    double vol_Sigma_error = 0.0;
    double vol_B = 0.0;
    double vol_B_error = 0.0;
    std::size_t n_samples = 0;
    int quadrature_nodes = 0;
    double mean_T = 0.0;

    double cal_diff() const { return cal - vol_M; }
    double cal_combined_error() const { return mc_stderr + integration_error + vol_M_error; }
    double boundary_diff() const { return vol_Sigma - vol_B; }
    double boundary_combined_error() const { return vol_Sigma_error + vol_B_error + 1e-12 * std::abs(vol_B); }
};

/// Monte Carlo for int T omega^n (uniform in the page chart, stratified
/// along the first coordinate) and quadratures for the three volumes.
/// Samples are processed in fixed blocks seeded by block index, so the
/// result does not depend on the thread count.
inline CalabiReport calabi(const PageModel& m, std::size_t n, std::uint64_t seed, const IntegrateOptions& opts = {},
                           int quadrature_nodes = 24, unsigned threads = 0)
{
    if (n < 2)
        throw ValidationError("calabi needs at least two samples");
    const std::size_t block = 4096;
    const std::size_t blocks = (n + block - 1) / block;
    std::vector<double> sum(blocks, 0.0), sum2(blocks, 0.0), tsum(blocks, 0.0);
    std::vector<std::exception_ptr> errs(blocks);
    double box_vol = 1.0;
    for (auto [a, b] : m.page.box)
        box_vol *= b - a;
    auto run_block = [&](std::size_t bi) {
        try {
            std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * (bi + 1)));
            std::uniform_real_distribution<double> ud(0.0, 1.0);
            std::size_t lo = bi * block, hi = std::min(n, lo + block);
            for (std::size_t i = lo; i < hi; ++i) {
                Vector s(m.page.dim());
                for (int k = 0; k < s.size(); ++k) {
                    auto [a, b] = m.page.box[k];
                    double u = k == 0 ? (static_cast<double>(i) + ud(rng)) / static_cast<double>(n) : ud(rng);
                    s(k) = a + (b - a) * u;
                }
                Vector x = m.page.point(s);
                double dens = std::abs(quad::power_of_two_form(m.dalpha, x, quad::tangents(m.page, s)));
                double T = first_return(m, x, opts).T;
                double v = box_vol * dens * T;
                sum[bi] += v;
                sum2[bi] += v * v;
                tsum[bi] += T;
            }
        } catch (...) {
            errs[bi] = std::current_exception();
        }
    };
    unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t bi = t; bi < blocks; bi += nt)
                run_block(bi);
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errs)
        if (e)
            std::rethrow_exception(e);
    double s1 = 0.0, s2 = 0.0, st = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        s1 += sum[b];
        s2 += sum2[b];
        st += tsum[b];
    }
    CalabiReport r;
    r.n_samples = n;
    r.cal = s1 / n;
    double var = std::max(0.0, s2 / n - r.cal * r.cal);
    r.mc_stderr = std::sqrt(var / (n - 1));
    r.mean_T = st / n;
    IntegrateOptions o = opts;
    r.integration_error = 10.0 * o.rtol * std::abs(r.cal);
    if (r.mc_stderr > 0.1 * std::abs(r.cal))
        throw PrecisionError("Monte Carlo standard error exceeds 10% of the estimate; use more samples");
    r.quadrature_nodes = quadrature_nodes;
    auto vm = manifold_volume(m, quadrature_nodes);
    auto vs = page_volume(m, quadrature_nodes);
    auto vb = binding_volume(m, quadrature_nodes);
    r.vol_M = vm.value;
    r.vol_M_error = vm.error;
    r.vol_Sigma = vs.value;
    r.vol_Sigma_error = vs.error;
    r.vol_B = vb.value;
    r.vol_B_error = vb.error;
    return r;
}

struct BoundaryVolumeReport
{
    quad::Estimate vol_Sigma;
    quad::Estimate vol_B;
    double diff = 0.0;
    double relative() const { return std::abs(diff) / std::max(std::abs(vol_B.value), 1e-300); }
};

inline BoundaryVolumeReport boundary_volume_identity(const PageModel& m, int nodes = 24)
{
    BoundaryVolumeReport r{page_volume(m, nodes), binding_volume(m, nodes), 0.0};
    r.diff = r.vol_Sigma.value - r.vol_B.value;
    return r;
}

/// Hamiltonian generating the return map on the page: autonomous H with
/// field X_H (in ambient coordinates) and optional boundary value C.
struct GeneratingData
{
    std::function<double(const Vector&)> H;
    VectorFieldSpec field;
    std::optional<double> C;         // H|_B, when H is of twist type
    std::optional<Vector> calibrate; // page point used to fix C = T - F otherwise
};

struct PeriodReport
{
    double lhs = 0.0;
    double rhs = 0.0;
    double diff = 0.0;
    double action = 0.0; // A_{H^{#k}}(gamma)
    double C = 0.0;
    bool C_calibrated = false;
};

/// Closed Reeb orbit period through x: first return to the hyperplane
/// through x orthogonal to R(x), restricted to a small ball around x.
inline double closed_orbit_period(const PageModel& m, const Vector& x, double t_max, const IntegrateOptions& opts = {},
                                  double ball = 1e-2)
{
    Vector r = m.field.eval(x, 0.0);
    SectionSpec sec{[x, r](const Vector& y) { return r.dot(y - x); },
                    [x, ball](const Vector& y) { return (y - x).norm() < ball; }, [r](const Vector&) { return r; }};
    auto hit = section_crossing(m.field, x, sec, t_max, model_options(m, opts), 1e-6);
    if ((hit.x - x).norm() > 1e-8)
        throw ValidationError("orbit does not close up within 1e-8");
    return hit.t;
}

/// F(x) = int_0^1 (lambda(X_H) - H)(phi_t x) dt, the generating function of
/// tau^* lambda - lambda.
inline double generating_function(const PageModel& m, const GeneratingData& g, const Vector& x,
                                  const IntegrateOptions& opts = {})
{
    IntegrateOptions o = opts;
    o.surface.reset();
    o.action_density = [&](const Vector& y, const Vector& v) { return m.alpha(y, v) - g.H(y); };
    return integrate(g.field, x, 1.0, o).total_action();
}

/// lhs = period of the closed Reeb orbit through the k-periodic point x
/// (sum of return times if x is interior, the binding orbit period
/// otherwise); rhs = A_{H^{#k}}(gamma) + k C.
inline PeriodReport period_formula_check(const PageModel& m, const GeneratingData& g, const Vector& x, int k,
                                         const IntegrateOptions& opts = {})
{
    if (k < 1)
        throw ValidationError("period must be positive");
    PeriodReport rep;
    IntegrateOptions o = opts;
    o.surface.reset();
    FlowArc ham = integrate(g.field, x, static_cast<double>(k), o);
    if ((ham.end() - x).norm() > 1e-8)
        throw ValidationError("point is not k-periodic for the Hamiltonian flow");
    bool interior = !m.section.interior || m.section.interior(x);
    if (interior) {
        Vector y = x;
        for (int i = 0; i < k; ++i) {
            ReturnSample r = first_return(m, y, opts);
            rep.lhs += r.T;
            y = r.tau_x;
        }
        if ((y - x).norm() > 1e-8)
            throw ValidationError("point is not k-periodic for the return map");
    } else {
        double p = closed_orbit_period(m, x, m.t_max, opts);
        rep.lhs = p * k;
    }
    o.action_density = [&](const Vector& y, const Vector& v) { return m.alpha(y, v) - g.H(y); };
    rep.action = integrate(g.field, x, static_cast<double>(k), o).total_action();
    if (g.C) {
        rep.C = *g.C;
    } else if (g.calibrate) {
        rep.C = first_return(m, *g.calibrate, opts).T - generating_function(m, g, *g.calibrate, opts);
        rep.C_calibrated = true;
    } else {
        throw ValidationError("generating data needs a boundary value or a calibration point");
    }
    rep.rhs = rep.action + k * rep.C;
    rep.diff = rep.lhs - rep.rhs;
    return rep;
}

namespace models {

/// S^3 with beta = sum (1/a_j)(x_j dy_j - y_j dx_j), Reeb flow
/// z_j -> e^{i a_j t} z_j; page {z_1 real positive}, binding {z_1 = 0}.
inline PageModel weighted_sphere(double a1, double a2)
{
    if (!(a1 > 0.0 && a2 > 0.0))
        throw ValidationError("weights must be positive");
    Vector a(2);
    a << a1, a2;
    PageModel m;
    m.name = "weighted-sphere";
    m.convention = "beta = sum_j (1/a_j)(x_j dy_j - y_j dx_j)";
    Matrix gen = Matrix::Zero(4, 4);
    gen(0, 1) = -a1;
    gen(1, 0) = a1;
    gen(2, 3) = -a2;
    gen(3, 2) = a2;
    m.field = linear_field(gen);
    m.section = {[](const Vector& x) { return x(1); }, [](const Vector& x) { return x(0) > 0.0; },
                 [](const Vector& x) {
                     Vector g = Vector::Zero(x.size());
                     g(1) = 1.0;
                     return g;
                 }};
    m.alpha = [a](const Vector& x, const Vector& v) { return weighted::beta1(a, x, v); };
    m.dalpha = [a](const Vector&, const Vector& u, const Vector& v) { return weighted::dbeta1(a, u, v); };
    const double tp = 2 * std::numbers::pi;
    m.page = {[](const Vector& s) {
                  Vector z(4);
                  double r = s(0);
                  z << std::sqrt(std::max(0.0, 1 - r * r)), 0.0, r * std::cos(s(1)), r * std::sin(s(1));
                  return z;
              },
              {{0.0, 1.0}, {0.0, tp}}};
    m.binding = {[](const Vector& s) {
                     Vector z(4);
                     z << 0.0, 0.0, std::cos(s(0)), std::sin(s(0));
                     return z;
                 },
                 {{0.0, tp}}};
    m.manifold = {[](const Vector& s) {
                      Vector z(4);
                      z << std::cos(s(0)) * std::cos(s(1)), std::cos(s(0)) * std::sin(s(1)),
                          std::sin(s(0)) * std::cos(s(2)), std::sin(s(0)) * std::sin(s(2));
                      return z;
                  },
                  {{0.0, std::numbers::pi / 2}, {0.0, tp}, {0.0, tp}}};
    m.t_max = 4 * tp / a1;
    return m;
}

/// Round S^3 with the 1/2-normalised Liouville form: the open book whose
/// page is the disk and whose monodromy is the time-1 map of H = pi r^2.
inline PageModel disk_rotation()
{
    PageModel m = weighted_sphere(2.0, 2.0);
    m.name = "disk-rotation";
    m.convention = kLiouvilleConvention;
    return m;
}

/// H = pi r^2 on the page disk of disk_rotation(), in ambient coordinates.
inline GeneratingData disk_rotation_hamiltonian()
{
    Matrix gen = Matrix::Zero(4, 4);
    gen(2, 3) = -2 * std::numbers::pi;
    gen(3, 2) = 2 * std::numbers::pi;
    GeneratingData g;
    g.H = [](const Vector& x) { return std::numbers::pi * (x(2) * x(2) + x(3) * x(3)); };
    g.field = linear_field(gen);
    g.C = std::numbers::pi;
    return g;
}

/// Star-shaped surface |z|^2 - 1 + c Re(z1^4) = 0 with lambda = 1/2 sum (x dy - y dx).
/// {z1 = 0} is a closed Reeb orbit and {z1 real positive} a page.
inline PageModel perturbed_sphere(double c)
{
    if (!(std::abs(c) < 0.25))
        throw ValidationError("perturbation is restricted to |c| < 1/4");
    HypersurfaceSpec s = surfaces::perturbed(c);
    PageModel m;
    m.name = "perturbed-sphere";
    m.convention = kLiouvilleConvention;
    m.surface = s;
    m.field = reeb_field(s);
    m.section = {[](const Vector& x) { return x(1); }, [](const Vector& x) { return x(0) > 0.0; },
                 [](const Vector& x) {
                     Vector g = Vector::Zero(x.size());
                     g(1) = 1.0;
                     return g;
                 }};
    m.alpha = [](const Vector& x, const Vector& v) { return liouville(x, v); };
    m.dalpha = [](const Vector&, const Vector& u, const Vector& v) { return omega0(u, v); };
    // x1^2 solves u + c u^2 = 1 - rho^2 on the page.
    auto x1 = [c](double q) {
        double rhs = std::max(0.0, 1.0 - q);
        double u = c == 0.0 ? rhs : (-1.0 + std::sqrt(1.0 + 4.0 * c * rhs)) / (2.0 * c);
        return std::sqrt(std::max(0.0, u));
    };
    const double tp = 2 * std::numbers::pi;
    m.page = {[x1](const Vector& s) {
                  Vector z(4);
                  double r = s(0);
                  z << x1(r * r), 0.0, r * std::cos(s(1)), r * std::sin(s(1));
                  return z;
              },
              {{0.0, 1.0}, {0.0, tp}}};
    m.binding = {[](const Vector& s) {
                     Vector z(4);
                     z << 0.0, 0.0, std::cos(s(0)), std::sin(s(0));
                     return z;
                 },
                 {{0.0, tp}}};
    // Radial graph over the unit sphere: r^2 |u|^2 + c r^4 Re(u1^4) = 1.
    m.manifold = {[c](const Vector& s) {
                      Vector u(4);
                      u << std::cos(s(0)) * std::cos(s(1)), std::cos(s(0)) * std::sin(s(1)),
                          std::sin(s(0)) * std::cos(s(2)), std::sin(s(0)) * std::sin(s(2));
                      double x = u(0), y = u(1);
                      double q = c * (x * x * x * x - 6 * x * x * y * y + y * y * y * y);
                      double r2 = std::abs(q) < 1e-14 ? 1.0 : (-1.0 + std::sqrt(1.0 + 4.0 * q)) / (2.0 * q);
                      return Vector(std::sqrt(r2) * u);
                  },
                  {{0.0, std::numbers::pi / 2}, {0.0, tp}, {0.0, tp}}};
    m.t_max = 20.0;
    return m;
}

/// Katok page P_0 for n = 3 with alpha_eps / (2 pi), whose Reeb flow is the
/// printed closed-form flow. Page chart (theta, phi, rho, chi): v on S^2 by
/// polar angles, q = rho (cos chi e_theta + sin chi e_phi).
inline PageModel katok_page(double eps)
{
    KatokParams p{3, {eps}, true};
    p.validate();
    PageModel m;
    m.name = "katok-page";
    m.convention = "alpha_eps / (2 pi), alpha = sum_k (x_k dy_k - y_k dx_k) in the w-chart";
    m.field = katok::reeb_field(p);
    m.section = katok::page_section();
    const double tp = 2 * std::numbers::pi;
    m.alpha = [p, tp](const Vector& x, const Vector& v) { return katok::alpha_eps(p, x, v) / tp; };
    m.dalpha = [p, tp](const Vector& x, const Vector& u, const Vector& v) {
        return katok::dalpha_eps(p, x, u, v) / tp;
    };
    auto frame = [](double th, double ph) {
        Vector v(3), et(3), ep(3);
        v << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        et << std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th);
        ep << -std::sin(ph), std::cos(ph), 0.0;
        return std::tuple{v, et, ep};
    };
    m.page = {[p, frame](const Vector& s) {
                  auto [v, et, ep] = frame(s(0), s(1));
                  Vector q = s(2) * (std::cos(s(3)) * et + std::sin(s(3)) * ep);
                  return to_real(katok::page_point(p, v, q));
              },
              {{0.0, std::numbers::pi}, {0.0, tp}, {0.0, 1.0}, {0.0, tp}}};
    m.binding = {[p, frame](const Vector& s) {
                     auto [v, et, ep] = frame(s(0), s(1));
                     Vector q = std::cos(s(2)) * et + std::sin(s(2)) * ep;
                     return to_real(katok::page_point(p, v, q));
                 },
                 {{0.0, std::numbers::pi}, {0.0, tp}, {0.0, tp}}};
    m.t_max = 3.0;
    return m;
}

/// K = H_eps^{-1} Delta_eps generating the Katok return map for
/// omega = d alpha_eps / (2 pi); its field is 2 pi X.
inline GeneratingData katok_hamiltonian(double eps)
{
    KatokParams p{3, {eps}, true};
    Matrix gen = Matrix::Zero(8, 8);
    for (int k = 0; k < 8; ++k) {
        Vector e = Vector::Zero(8);
        e(k) = 1.0;
        gen.col(k) = 2 * std::numbers::pi * katok::twist_generator(p, e);
    }
    GeneratingData g;
    g.H = [p](const Vector& x) { return katok::generating_hamiltonian(p, to_complex(x)); };
    g.field = linear_field(gen);
    Vector v(3), q(3);
    v << 0.3, -0.5, 0.8;
    v.normalize();
    q << 0.4, 0.2, 0.0;
    q -= q.dot(v) * v;
    g.calibrate = to_real(katok::page_point(p, v, q));
    return g;
}

} // namespace models

} // namespace sympath

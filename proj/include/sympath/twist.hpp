#pragma once

// Integrable twist maps on the unit codisk bundle of S^n (n = 1, 2), the
// boundary twist predicate, the linear-at-infinity extension of a collar
// Hamiltonian, and the fibered Dehn twist open book on an annulus page.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "errors.hpp"
#include "flow.hpp"
#include "symplectic.hpp"

namespace sympath {

// ---------------------------------------------------------------------------
// Integrable twist maps

/// K(q, p) = 2 pi g(|p|) on {|q| = 1, q.p = 0, |p| <= radius} in R^{n+1} x R^{n+1}.
struct TwistMapSpec
{
    int n = 1;
    std::function<double(double)> g;
    std::function<double(double)> dg;
    double radius = 1.0;

    void validate() const
    {
        if (n != 1 && n != 2)
            throw ValidationError("twist maps are built for n = 1 or n = 2");
        if (!g || !dg)
            throw ValidationError("twist profile needs g and g'");
        if (!(radius > 0.0))
            throw ValidationError("domain radius must be positive");
        if (std::abs(g(0.0)) > 1e-12 || std::abs(dg(0.0)) > 1e-12)
            throw ValidationError("twist profile must satisfy g(0) = g'(0) = 0");
    }
    int ambient() const { return n + 1; }
};

/// g(s) = sum_j c_j s^j for j >= 2.
inline TwistMapSpec polynomial_twist(std::vector<double> coeffs_from_2, int n = 1, double radius = 1.0)
{
    TwistMapSpec s;
    s.n = n;
    s.radius = radius;
    s.g = [c = coeffs_from_2](double x) {
        double v = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            v += c[j] * std::pow(x, static_cast<double>(j + 2));
        return v;
    };
    s.dg = [c = coeffs_from_2](double x) {
        double v = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            v += (j + 2.0) * c[j] * std::pow(x, static_cast<double>(j + 1));
        return v;
    };
    return s;
}

/// Point (q, p) stored as one vector of length 2(n+1).
struct CotangentPoint
{
    Vector q;
    Vector p;

    Vector packed() const
    {
        Vector x(q.size() + p.size());
        x << q, p;
        return x;
    }
    static CotangentPoint unpack(const Vector& x)
    {
        Eigen::Index m = x.size() / 2;
        return {x.head(m), x.tail(m)};
    }
};

/// Geodesic flow for time a: rotation by angle a in the plane of q and p/|p|.
/// Written for any (q, p), so its differential on tangent vectors is the
/// differential of the map on the cotangent bundle.
inline CotangentPoint geodesic_rotation(const CotangentPoint& x, double a)
{
    double s = x.p.norm();
    if (s == 0.0)
        return x;
    Vector e = x.p / s;
    return {std::cos(a) * x.q + std::sin(a) * e, -s * std::sin(a) * x.q + std::cos(a) * x.p};
}

/// tau(q, p) = geodesic flow for time 2 pi g'(|p|).
inline CotangentPoint twist_map(const TwistMapSpec& spec, const CotangentPoint& x)
{
    double s = x.p.norm();
    if (s > spec.radius * (1 + 1e-12))
        throw DomainError("point lies outside the codisk bundle");
    return geodesic_rotation(x, 2 * std::numbers::pi * spec.dg(s));
}

inline CotangentPoint twist_iterate(const TwistMapSpec& spec, CotangentPoint x, int k)
{
    for (int i = 0; i < k; ++i)
        x = twist_map(spec, x);
    return x;
}

/// Rotation number in turns per iterate on the level |p| = s.
inline double rotation_number(const TwistMapSpec& spec, double s) { return spec.dg(s); }

inline CotangentPoint level_point(const TwistMapSpec& spec, double s)
{
    Vector q = Vector::Zero(spec.ambient()), p = Vector::Zero(spec.ambient());
    q(0) = 1.0;
    p(1) = s;
    return {q, p};
}

inline CotangentPoint random_cotangent_point(const TwistMapSpec& spec, std::mt19937_64& rng, double s_min = 0.0)
{
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> us(s_min, spec.radius);
    const int m = spec.ambient();
    Vector q(m), p(m);
    for (int i = 0; i < m; ++i) {
        q(i) = nd(rng);
        p(i) = nd(rng);
    }
    q.normalize();
    p -= p.dot(q) * q;
    p *= us(rng) / p.norm();
    return {q, p};
}

/// Orthonormal basis of the tangent space of T*S^n at x (columns).
inline Matrix cotangent_tangent_basis(const CotangentPoint& x)
{
    const Eigen::Index m = x.q.size();
    Matrix c = Matrix::Zero(2, 2 * m);
    c.row(0).head(m) = x.q.transpose();
    c.row(1).head(m) = x.p.transpose();
    c.row(1).tail(m) = x.q.transpose();
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(2 * m - 2);
}

/// Canonical form sum dq_i ^ dp_i on packed vectors.
inline double canonical_form(const Vector& u, const Vector& v)
{
    const Eigen::Index m = u.size() / 2;
    return u.head(m).dot(v.tail(m)) - u.tail(m).dot(v.head(m));
}

/// max |omega(D tau u_i, D tau u_j) - omega(u_i, u_j)| over a tangent basis,
/// with D tau by Richardson-extrapolated central differences.
inline double twist_symplectic_residual(const TwistMapSpec& spec, const CotangentPoint& x, double h = 2e-4)
{
    Matrix basis = cotangent_tangent_basis(x);
    Vector x0 = x.packed();
    // the stencil may leave the codisk bundle; the closed form extends smoothly
    auto tau = [&](const Vector& y) {
        auto c = CotangentPoint::unpack(y);
        return geodesic_rotation(c, 2 * std::numbers::pi * spec.dg(c.p.norm())).packed();
    };
    auto central = [&](const Vector& u, double step) {
        Vector a = tau(x0 + step * u);
        Vector b = tau(x0 - step * u);
        return Vector((a - b) / (2 * step));
    };
    std::vector<Vector> images;
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
        images.push_back((4 * central(basis.col(i), h / 2) - central(basis.col(i), h)) / 3);
    double r = 0.0;
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
        for (Eigen::Index j = i + 1; j < basis.cols(); ++j)
            r = std::max(r, std::abs(canonical_form(images[i], images[j]) -
                                     canonical_form(basis.col(i), basis.col(j))));
    return r;
}

struct PeriodicLevel
{
    int k = 1;           // minimal period
    int j = 0;           // turns per k iterates
    double level = 0.0;  // |p|
    CotangentPoint point;
    double residual = 0.0; // |tau^k(x) - x|
};

/// Levels where the rotation number is j/k in lowest terms, for k <= k_max.
/// Roots of g' - j/k are bracketed on a grid of `grid` cells, so
/// non-monotone profiles give every bracketed level. Each level is refined by
/// bisection and verified by iterating the map.
inline std::vector<PeriodicLevel> periodic_point_search(const TwistMapSpec& spec, int k_max, int grid = 2000,
                                                        double accept = 1e-9)
{
    spec.validate();
    if (k_max < 1)
        throw ValidationError("k_max must be at least 1");
    std::vector<double> xs(grid + 1), ys(grid + 1);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= grid; ++i) {
        xs[i] = spec.radius * i / grid;
        ys[i] = spec.dg(xs[i]);
        lo = std::min(lo, ys[i]);
        hi = std::max(hi, ys[i]);
    }
    std::vector<PeriodicLevel> out;
    for (int k = 1; k <= k_max; ++k) {
        for (int j = static_cast<int>(std::ceil(lo * k - 1e-12)); j <= static_cast<int>(std::floor(hi * k + 1e-12));
             ++j) {
            if (std::gcd(std::abs(j), k) != 1)
                continue;
            const double target = static_cast<double>(j) / k;
            std::vector<double> roots;
            for (int i = 0; i < grid; ++i) {
                double a = ys[i] - target, b = ys[i + 1] - target;
                if (a == 0.0)
                    roots.push_back(xs[i]);
                else if (a * b < 0.0) {
                    double l = xs[i], r = xs[i + 1], fl = a;
                    for (int it = 0; it < 200 && r - l > 1e-16; ++it) {
                        double m = 0.5 * (l + r), fm = spec.dg(m) - target;
                        if ((fm < 0) == (fl < 0)) {
                            l = m;
                            fl = fm;
                        } else {
                            r = m;
                        }
                    }
                    roots.push_back(0.5 * (l + r));
                }
            }
            if (ys[grid] == target)
                roots.push_back(xs[grid]);
            for (double s : roots) {
                PeriodicLevel pl;
                pl.k = k;
                pl.j = j;
                pl.level = s;
                pl.point = level_point(spec, s);
                pl.residual = (twist_iterate(spec, pl.point, k).packed() - pl.point.packed()).norm();
                if (pl.residual <= accept)
                    out.push_back(pl);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.level != b.level ? a.level < b.level : a.k < b.k;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Boundary models and collar Hamiltonians

/// Contact boundary B in the unit sphere of R^dim with alpha = c * lambda|_B,
/// lambda = 1/2 sum (x dy - y dx). The cylindrical end (r, b) embeds as
/// z = sqrt(c r) b with lambda(z) = r alpha, so d(r alpha) is omega0.
struct ContactBoundary
{
    std::string name;
    int dim = 2; // 2: circle, 4: round S^3
    double c = 2.0;

    /// Circle with alpha = (c/2) dphi; c = 2 gives alpha = dphi.
    static ContactBoundary circle(double c = 2.0) { return {"S1", 2, c}; }
    static ContactBoundary sphere3() { return {"S3", 4, 1.0}; }

    /// All Reeb orbits are closed with this minimal period.
    double reeb_period() const { return std::numbers::pi * c; }
    Vector reeb(const Vector& b) const { return (2.0 / c) * (complex_structure(dim) * b); }
    Vector reeb_flow(const Vector& b, double t) const { return pair_rotation(dim, 2.0 * t / c) * b; }

    /// Orthonormal basis of xi = {b, I b}^perp (no columns on the circle).
    Matrix xi_frame(const Vector& b) const
    {
        if (dim == 2)
            return Matrix(2, 0);
        Matrix m(dim, 2);
        m.col(0) = b;
        m.col(1) = complex_structure(dim) * b;
        Eigen::JacobiSVD<Matrix> svd(m.transpose(), Eigen::ComputeFullV);
        if (svd.singularValues().minCoeff() < 1e-12)
            throw DegeneracyError("contact frame is degenerate at this point");
        return svd.matrixV().rightCols(dim - 2);
    }
    double dalpha(const Vector& u, const Vector& v) const { return c * omega0(u, v); }

    Vector embed(double r, const Vector& b) const { return std::sqrt(c * r) * b; }
    std::pair<double, Vector> chart(const Vector& z) const
    {
        double n = z.norm();
        return {n * n / c, z / n};
    }
    /// Image of the cylinder vector (dr, vb) at (r, b).
    Vector push(double r, const Vector& b, double dr, const Vector& vb) const
    {
        Vector z = embed(r, b);
        return dr * z / (2 * r) + std::sqrt(c * r) * vb;
    }

    /// Distance from a to the action spectrum {m * period : m >= 1}.
    double spectrum_distance(double a) const
    {
        double T = reeb_period();
        double m = std::max(1.0, std::round(a / T));
        return std::abs(a - m * T);
    }

    Vector random_point(std::mt19937_64& rng) const
    {
        std::normal_distribution<double> nd;
        Vector b(dim);
        for (int i = 0; i < dim; ++i)
            b(i) = nd(rng);
        return b.normalized();
    }
    Vector circle_point(double phi) const
    {
        if (dim != 2)
            throw ValidationError("angle coordinates exist only on the circle model");
        Vector b(2);
        b << std::cos(phi), std::sin(phi);
        return b;
    }
};

using CollarFn = std::function<double(double r, const Vector& b, double t)>;
using BoundaryFn = std::function<double(const Vector& b, double t)>;

/// H_t on the collar (1 - eps, 1] x B, time period 1.
struct CollarHamiltonian
{
    ContactBoundary boundary = ContactBoundary::circle();
    CollarFn H;
    double epsilon = 0.5;
};

namespace detail {

inline constexpr double kCollarStep = 1e-3;

/// Fourth-order one-sided derivative in r at r0 from the left.
inline double left_dr(const CollarFn& f, double r0, const Vector& b, double t, double h = kCollarStep)
{
    double v[5];
    for (int i = 0; i < 5; ++i)
        v[i] = f(r0 - i * h, b, t);
    return (25 * v[0] - 48 * v[1] + 36 * v[2] - 16 * v[3] + 3 * v[4]) / (12 * h);
}

/// Fourth-order one-sided second derivative in r at r0 from the left.
inline double left_drr(const CollarFn& f, double r0, const Vector& b, double t, double h = 5e-3)
{
    double v[6];
    for (int i = 0; i < 6; ++i)
        v[i] = f(r0 - i * h, b, t);
    return (45 * v[0] - 154 * v[1] + 214 * v[2] - 156 * v[3] + 61 * v[4] - 10 * v[5]) / (12 * h * h);
}

/// Derivative of b -> f(b) along the tangent vector v, through the sphere.
inline double along(const std::function<double(const Vector&)>& f, const Vector& b, const Vector& v,
                    double h = 1e-6)
{
    return (f((b + h * v).normalized()) - f((b - h * v).normalized())) / (2 * h);
}

inline double along_reeb(const ContactBoundary& B, const std::function<double(const Vector&)>& f, const Vector& b,
                         double h = 1e-6)
{
    return (f(B.reeb_flow(b, h)) - f(B.reeb_flow(b, -h))) / (2 * h);
}

/// X^xi_f with dalpha(X, .) = -df on xi.
inline Vector xi_hamiltonian(const ContactBoundary& B, const std::function<double(const Vector&)>& f,
                             const Vector& b)
{
    Matrix fr = B.xi_frame(b);
    if (fr.cols() == 0)
        return Vector::Zero(B.dim);
    Vector u = fr.col(0), v = fr.col(1);
    double c = B.dalpha(u, v);
    return (-along(f, b, v) * u + along(f, b, u) * v) / c;
}

} // namespace detail

struct BoundarySample
{
    Vector b;
    double t = 0.0;
};

inline std::vector<BoundarySample> boundary_samples(const ContactBoundary& B, int count, std::uint64_t seed,
                                                    bool time_dependent = true)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::vector<BoundarySample> out;
    for (int i = 0; i < count; ++i) {
        Vector b = B.random_point(rng);
        out.push_back({b, time_dependent ? ut(rng) : 0.0});
    }
    return out;
}

struct TwistVerdict
{
    bool twist = false;
    double min_h = std::numeric_limits<double>::infinity();   // Reeb coefficient dH(V)|_B
    double max_liouville = 0.0;                               // |dH(R)|
    double max_xi = 0.0;                                      // |dH restricted to xi|
    std::optional<BoundarySample> witness;                    // worst sample
    std::string reason;
};

/// Samples X_H on r = 1. In (r, b) coordinates X_H = dH/dr R - dH(R) d/dr +
/// (1/r) X^xi, so the predicate asks dH(R) = 0, dH|xi = 0 and dH/dr > 0.
inline TwistVerdict twist_condition_check(const CollarHamiltonian& H, const std::vector<BoundarySample>& samples,
                                          double tol = 1e-8)
{
    if (!H.H)
        throw ValidationError("collar Hamiltonian is not set");
    if (samples.empty())
        throw ValidationError("twist check needs boundary samples");
    TwistVerdict v;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        auto on_b = [&](const Vector& b) { return H.H(1.0, b, s.t); };
        double h = detail::left_dr(H.H, 1.0, s.b, s.t);
        double liou = std::abs(detail::along_reeb(H.boundary, on_b, s.b));
        double xi = 0.0;
        Matrix fr = H.boundary.xi_frame(s.b);
        for (Eigen::Index j = 0; j < fr.cols(); ++j)
            xi = std::hypot(xi, detail::along(on_b, s.b, fr.col(j)));
        if (!std::isfinite(h) || !std::isfinite(liou) || !std::isfinite(xi))
            throw ValidationError("gradient of H is unavailable on the boundary");
        v.min_h = std::min(v.min_h, h);
        v.max_liouville = std::max(v.max_liouville, liou);
        v.max_xi = std::max(v.max_xi, xi);
        double badness = std::max({liou - tol, xi - tol, -h});
        if (badness > worst) {
            worst = badness;
            v.witness = s;
        }
    }
    if (v.max_liouville > tol)
        v.reason = "Liouville component does not vanish on the boundary";
    else if (v.max_xi > tol)
        v.reason = "contact-plane component does not vanish on the boundary";
    else if (!(v.min_h > 0.0))
        v.reason = "Reeb coefficient is not positive";
    v.twist = v.reason.empty();
    return v;
}

// ---------------------------------------------------------------------------
// Collar split and extension

struct CollarSplit
{
    CollarHamiltonian source;
    BoundaryFn H0;
    BoundaryFn H1;
    CollarFn H2; // defined on (1 - eps, 1], finite at r = 1
    double band = 1e-3;

    double reconstruct(double r, const Vector& b, double t) const
    {
        return H0(b, t) + (r - 1) * H1(b, t) + 0.5 * (r - 1) * (r - 1) * H2(r, b, t);
    }
};

/// H0 = H(1), H1 = dH/dr(1), H2 = 2 (H - H0 - (r-1) H1)/(r-1)^2. Within
/// `band` of r = 1 the quotient loses digits, so H2 is interpolated linearly
/// between its one-sided limit d^2H/dr^2(1) and its value at 1 - band.
inline CollarSplit split_collar(const CollarHamiltonian& H, const std::vector<BoundarySample>& check = {},
                                double band = 1e-3, double tol = 1e-8)
{
    if (!H.H)
        throw ValidationError("collar Hamiltonian is not set");
    if (!(H.epsilon > 0.0 && H.epsilon <= 1.0))
        throw ValidationError("collar width must lie in (0, 1]");
    CollarSplit s;
    s.source = H;
    s.band = band;
    auto f = H.H;
    s.H0 = [f](const Vector& b, double t) { return f(1.0, b, t); };
    s.H1 = [f](const Vector& b, double t) { return detail::left_dr(f, 1.0, b, t); };
    auto quotient = [f](double r, const Vector& b, double t) {
        double d = r - 1;
        return 2 * (f(r, b, t) - f(1.0, b, t) - d * detail::left_dr(f, 1.0, b, t)) / (d * d);
    };
    s.H2 = [f, quotient, band](double r, const Vector& b, double t) {
        if (1 - r >= band)
            return quotient(r, b, t);
        double lim = detail::left_drr(f, 1.0, b, t);
        double w = (1 - r) / band;
        return (1 - w) * lim + w * quotient(1 - band, b, t);
    };
    for (const auto& smp : check) {
        for (int i = 0; i <= 20; ++i) {
            double r = 1 - H.epsilon * i / 20.0 * 0.999;
            double res = std::abs(s.reconstruct(r, smp.b, smp.t) - f(r, smp.b, smp.t));
            if (!(res <= tol))
                throw ResolutionError("collar split does not reconstruct H (residual " + std::to_string(res) +
                                      "): H is not smooth enough at the boundary");
        }
        double gap = std::abs(detail::left_drr(f, 1.0, smp.b, smp.t) - quotient(1 - band, smp.b, smp.t));
        if (!(gap <= 1e-2 + 1e-2 * std::abs(detail::left_drr(f, 1.0, smp.b, smp.t))))
            throw ResolutionError("remainder H2 has no finite limit at the boundary: H is not C^2");
    }
    return s;
}

/// rho = 1 on r <= 1 + delta0, 0 on r >= 1 + delta1, quintic smoothstep between.
struct Cutoff
{
    double delta0 = 0.05;
    double delta1 = 0.1;

    double value(double r) const
    {
        double x = (r - 1 - delta0) / (delta1 - delta0);
        if (x <= 0)
            return 1.0;
        if (x >= 1)
            return 0.0;
        return 1 - x * x * x * (10 - 15 * x + 6 * x * x);
    }
    double derivative(double r) const
    {
        double x = (r - 1 - delta0) / (delta1 - delta0);
        if (x <= 0 || x >= 1)
            return 0.0;
        return -30 * x * x * (1 - x) * (1 - x) / (delta1 - delta0);
    }
    double max_slope() const { return 1.875 / (delta1 - delta0); }
    static constexpr const char* kind = "quintic smoothstep";
};

struct ExtensionParams
{
    double delta0 = 0.05;
    double delta1 = 0.1;
    double A = 1.0;
    double C = 0.0;
    double spectrum_gap = 1e-6;

    Cutoff cutoff() const { return {delta0, delta1}; }
    ExtensionParams scaled(double f) const
    {
        ExtensionParams p = *this;
        p.delta0 *= f;
        p.delta1 *= f;
        return p;
    }
};

/// Smallest admissible A and C over the samples (A nudged off the spectrum).
inline ExtensionParams default_extension_params(const CollarSplit& s, const std::vector<BoundarySample>& samples,
                                                double delta1 = 0.1)
{
    ExtensionParams p;
    p.delta1 = delta1;
    p.delta0 = delta1 / 2;
    double a = -std::numeric_limits<double>::infinity(), c = a;
    for (const auto& x : samples) {
        a = std::max(a, s.H1(x.b, x.t));
        c = std::max(c, s.H0(x.b, x.t));
    }
    p.A = a + 1e-3;
    while (s.source.boundary.spectrum_distance(p.A) < 1e-3)
        p.A += 2e-3;
    p.C = c;
    return p;
}

inline void validate_extension(const CollarSplit& s, const ExtensionParams& p,
                               const std::vector<BoundarySample>& samples)
{
    if (!(p.delta0 > 0 && p.delta0 < p.delta1))
        throw ValidationError("extension needs 0 < delta0 < delta1");
    if (!(p.delta1 < s.source.epsilon))
        throw ValidationError("delta1 must be smaller than the collar width for the reflected remainder");
    Cutoff rho = p.cutoff();
    for (int i = 0; i < 200; ++i) {
        double r0 = 1 + p.delta1 * 1.1 * i / 200, r1 = 1 + p.delta1 * 1.1 * (i + 1) / 200;
        if (rho.value(r1) > rho.value(r0) || rho.derivative(r0) > 0)
            throw ValidationError("cutoff is not decreasing");
    }
    for (const auto& x : samples) {
        if (s.H1(x.b, x.t) > p.A + 1e-12)
            throw ValidationError("slope A is below the boundary Reeb coefficient");
        if (s.H0(x.b, x.t) > p.C + 1e-12)
            throw ValidationError("constant C is below the boundary value of H");
    }
    if (s.source.boundary.spectrum_distance(p.A) < p.spectrum_gap)
        throw ValidationError("slope A lies in the Reeb action spectrum");
}

/// H^ = H^0 + (r-1) H^1 + (r-1)^2/2 H^2 with H^0 = rho H0 + (1-rho) C,
/// H^1 = rho H1 + (1-rho) A and H^2 = rho H2bar, H2bar the even reflection
/// of H2 across r = 1.
struct ExtensionBundle
{
    CollarSplit split;
    ExtensionParams params;

    double r_lin() const { return 1 + params.delta1; }
    double r_min() const { return 1 - split.source.epsilon; }
    const ContactBoundary& boundary() const { return split.source.boundary; }

    double h2bar(double r, const Vector& b, double t) const { return split.H2(r <= 1 ? r : 2 - r, b, t); }
    double h2bar_dr(double r, const Vector& b, double t, double h = 1e-5) const
    {
        if (r + h > 1 && r - h < 1)
            return r <= 1 ? (h2bar(r, b, t) - h2bar(r - h, b, t)) / h : (h2bar(r + h, b, t) - h2bar(r, b, t)) / h;
        return (h2bar(r + h, b, t) - h2bar(r - h, b, t)) / (2 * h);
    }

    double hat0(double r, const Vector& b, double t) const
    {
        double rho = params.cutoff().value(r);
        return rho == 0 ? params.C : rho * split.H0(b, t) + (1 - rho) * params.C;
    }
    double hat1(double r, const Vector& b, double t) const
    {
        double rho = params.cutoff().value(r);
        return rho == 0 ? params.A : rho * split.H1(b, t) + (1 - rho) * params.A;
    }
    double hat2(double r, const Vector& b, double t) const
    {
        double rho = params.cutoff().value(r);
        return rho == 0 ? 0.0 : rho * h2bar(r, b, t);
    }

    double value(double r, const Vector& b, double t) const
    {
        if (r < r_min())
            throw DomainError("point lies inside the collar's inner edge");
        if (r >= r_lin())
            return params.A * (r - 1) + params.C;
        double d = r - 1;
        return hat0(r, b, t) + d * hat1(r, b, t) + 0.5 * d * d * hat2(r, b, t);
    }

    /// Reeb coefficient F = dH^/dr, assembled term by term.
    double F(double r, const Vector& b, double t) const
    {
        if (r >= r_lin())
            return params.A;
        Cutoff c = params.cutoff();
        double rho = c.value(r), drho = c.derivative(r), d = r - 1;
        double h0 = split.H0(b, t), h1 = split.H1(b, t), h2 = h2bar(r, b, t);
        double dhat0 = drho * (h0 - params.C);
        double hat1v = rho * h1 + (1 - rho) * params.A;
        double dhat1 = drho * (h1 - params.A);
        double hat2v = rho * h2;
        double dhat2 = drho * h2 + rho * h2bar_dr(r, b, t);
        return dhat0 + hat1v + d * dhat1 + d * hat2v + 0.5 * d * d * dhat2;
    }

    /// G = dH^1(R) + (r-1)/2 dH^2(R).
    double G(double r, const Vector& b, double t) const
    {
        if (r >= r_lin())
            return 0.0;
        double rho = params.cutoff().value(r);
        auto f1 = [&](const Vector& x) { return split.H1(x, t); };
        auto f2 = [&](const Vector& x) { return h2bar(r, x, t); };
        const auto& B = boundary();
        return rho * (detail::along_reeb(B, f1, b) + 0.5 * (r - 1) * detail::along_reeb(B, f2, b));
    }

    /// Hamiltonian vector field by the printed decomposition, pushed to R^dim.
    Vector formula_field(double r, const Vector& b, double t) const
    {
        const auto& B = boundary();
        Vector R = B.reeb(b);
        Vector out = B.push(r, b, 0.0, F(r, b, t) * R);
        if (r >= r_lin())
            return out;
        double rho = params.cutoff().value(r);
        Vector xi = Vector::Zero(B.dim);
        if (B.dim > 2) {
            auto f1 = [&](const Vector& x) { return rho * split.H1(x, t); };
            auto f2 = [&](const Vector& x) { return rho * h2bar(r, x, t); };
            xi = detail::xi_hamiltonian(B, f1, b) + 0.5 * (r - 1) * detail::xi_hamiltonian(B, f2, b);
        }
        out += B.push(r, b, 0.0, (r - 1) / r * xi);
        out += B.push(r, b, -(r - 1) * G(r, b, t), Vector::Zero(B.dim));
        return out;
    }

    /// I grad of z -> H^(r(z), b(z), t) by central differences.
    Vector numerical_field(const Vector& z, double t, double h = 1e-6) const
    {
        const auto& B = boundary();
        auto f = [&](const Vector& x) {
            auto [r, b] = B.chart(x);
            return value(r, b, t);
        };
        return complex_structure(B.dim) * fd_gradient(f, z, h);
    }
};

inline ExtensionBundle extend_hamiltonian(const CollarSplit& s, const ExtensionParams& p,
                                          const std::vector<BoundarySample>& samples)
{
    validate_extension(s, p, samples);
    return {s, p};
}

struct ReebCoefficientReport
{
    double min_F = std::numeric_limits<double>::infinity();
    double r_at = 0.0;
    BoundarySample at;
    std::vector<std::pair<double, double>> ladder; // (delta1, min_F)
    bool ladder_monotone = true;                   // min_F non-decreasing as delta1 shrinks
};

inline std::vector<double> radial_grid(const ExtensionBundle& e, int n = 120)
{
    std::vector<double> rs;
    double hi = e.r_lin() + 0.25;
    for (int i = 0; i <= n; ++i)
        rs.push_back(1 + (hi - 1) * i / n);
    for (int i = 1; i < 40; ++i)
        rs.push_back(1 + e.params.delta1 * i / 40.0);
    std::sort(rs.begin(), rs.end());
    return rs;
}

inline void scan_F(const ExtensionBundle& e, const std::vector<BoundarySample>& samples, ReebCoefficientReport& out)
{
    for (double r : radial_grid(e))
        for (const auto& s : samples) {
            double f = e.F(r, s.b, s.t);
            if (f < out.min_F) {
                out.min_F = f;
                out.r_at = r;
                out.at = s;
            }
        }
}

/// Minimum of F over the cylindrical end r >= 1 and the ladder delta1, delta1/2, delta1/4.
inline ReebCoefficientReport reeb_coefficient(const ExtensionBundle& e, const std::vector<BoundarySample>& samples,
                                              int ladder_steps = 3)
{
    ReebCoefficientReport rep;
    scan_F(e, samples, rep);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < ladder_steps; ++i) {
        ExtensionBundle ei{e.split, e.params.scaled(std::pow(0.5, i))};
        ReebCoefficientReport ri;
        scan_F(ei, samples, ri);
        rep.ladder.emplace_back(ei.params.delta1, ri.min_F);
        if (ri.min_F < prev - 1e-9)
            rep.ladder_monotone = false;
        prev = ri.min_F;
    }
    return rep;
}

/// Term-wise lower bound min h - defect, defect controlled by delta1 and the
/// size of the remainder H2 and its r-derivative.
inline double F_lower_bound(const ExtensionBundle& e, const std::vector<BoundarySample>& samples)
{
    double min_h = std::numeric_limits<double>::infinity(), m2 = 0.0, m2r = 0.0;
    const double d1 = e.params.delta1;
    for (const auto& s : samples) {
        min_h = std::min(min_h, e.split.H1(s.b, s.t));
        for (int i = 0; i <= 20; ++i) {
            double r = 1 - d1 + 2 * d1 * i / 20;
            m2 = std::max(m2, std::abs(e.h2bar(r, s.b, s.t)));
            m2r = std::max(m2r, std::abs(e.h2bar_dr(r, s.b, s.t)));
        }
    }
    double defect = d1 * m2 + 0.5 * d1 * d1 * (e.params.cutoff().max_slope() * m2 + m2r);
    return min_h - defect;
}

struct XhCheck
{
    double sup_error = 0.0;
    double sup_relative = 0.0;
    std::size_t samples = 0;
};

/// Printed field formula against I grad H^ in the ambient chart, at radii
/// spread over the collar, the cutoff region and the linear end.
inline XhCheck xh_formula_check(const ExtensionBundle& e, const std::vector<BoundarySample>& samples,
                                const std::vector<double>& radii = {})
{
    std::vector<double> rs = radii;
    if (rs.empty()) {
        double lo = std::max(e.r_min() + 0.01, 1 - 0.5 * e.split.source.epsilon);
        for (int i = 0; i <= 12; ++i)
            rs.push_back(lo + (e.r_lin() + 0.3 - lo) * i / 12);
    }
    XhCheck out;
    const auto& B = e.boundary();
    for (double r : rs)
        for (const auto& s : samples) {
            Vector a = e.formula_field(r, s.b, s.t);
            Vector n = e.numerical_field(B.embed(r, s.b), s.t);
            double err = (a - n).norm();
            out.sup_error = std::max(out.sup_error, err);
            out.sup_relative = std::max(out.sup_relative, err / std::max(1.0, n.norm()));
            ++out.samples;
        }
    return out;
}

struct WindingReport
{
    int k = 0;
    double inf_F = 0.0;
    double A_bound = 0.0;     // inf_F * k, in Reeb time
    double min_winding = 0.0; // smallest Reeb-time displacement over seeds
    double min_periods = 0.0; // min_winding / Reeb period
    std::size_t seeds = 0;
    bool holds(double tol = 1e-6) const { return min_winding >= A_bound - tol; }
};

/// Circle boundaries only: in (r, phi) the extended flow is phi' = F,
/// r' = -(r - 1) G. Seeds start in the boundary region r >= 1, which the
/// flow preserves. Beyond r_lin the flow is the exact rotation phi' = A.
inline WindingReport winding_lower_bound(const ExtensionBundle& e, int k, const std::vector<BoundarySample>& grid,
                                         int seeds = 24, std::uint64_t seed = 7)
{
    const auto& B = e.boundary();
    if (B.dim != 2)
        throw ValidationError("winding bound is implemented for two-dimensional W");
    if (k < 0)
        throw ValidationError("winding time must be non-negative");
    ReebCoefficientReport rc;
    scan_F(e, grid, rc);
    WindingReport w;
    w.k = k;
    w.inf_F = rc.min_F;
    w.A_bound = rc.min_F * k;
    w.min_winding = std::numeric_limits<double>::infinity();
    // phi measures Reeb time: b = circle_point(2 phi / c).
    const double s = 2.0 / B.c;
    VectorFieldSpec f;
    f.dim = 2;
    f.autonomous = false;
    f.eval = [&e, &B, s](const Vector& x, double t) {
        Vector b = B.circle_point(s * x(1));
        double tt = t - std::floor(t);
        Vector d(2);
        d(0) = -(x(0) - 1) * e.G(x(0), b, tt);
        d(1) = e.F(x(0), b, tt);
        return d;
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(1.0, e.r_lin() + 0.2), up(0.0, B.reeb_period());
    IntegrateOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-12;
    for (int i = 0; i < seeds; ++i) {
        Vector x0(2);
        x0 << (i == 0 ? 1.0 : ur(rng)), up(rng);
        double disp = 0.0;
        if (k > 0) {
            if (x0(0) >= e.r_lin())
                disp = e.params.A * k;
            else
                disp = integrate(f, x0, k, o).end()(1) - x0(1);
        }
        w.min_winding = std::min(w.min_winding, disp);
        ++w.seeds;
    }
    w.min_periods = w.min_winding / B.reeb_period();
    return w;
}

// ---------------------------------------------------------------------------
// Built-in collar data

/// H = C + h (r-1) + q (r-1)^2 on a circle boundary.
inline CollarHamiltonian quadratic_collar(double C, double h, double q, double epsilon = 0.9,
                                          ContactBoundary B = ContactBoundary::circle())
{
    return {B, [=](double r, const Vector&, double) { return C + h * (r - 1) + q * (r - 1) * (r - 1); }, epsilon};
}

/// K = 2 pi g(|p|) near |p| = 1 on one end of D*S^1 (r = |p|, alpha = dq).
inline CollarHamiltonian twist_collar(const TwistMapSpec& spec, double epsilon = 0.5)
{
    return {ContactBoundary::circle(), [g = spec.g](double r, const Vector&, double) {
                return 2 * std::numbers::pi * g(r);
            },
            epsilon};
}

/// b-dependent slope on the circle: H = C + (r-1) h(b, t) + (r-1)^2 q(b).
inline CollarHamiltonian wavy_circle_collar(double C = 0.5, double h0 = 1.0, double amp = 0.3, double q = 0.8,
                                            double epsilon = 0.9)
{
    return {ContactBoundary::circle(),
            [=](double r, const Vector& b, double t) {
                double phi = std::atan2(b(1), b(0));
                double h = h0 + amp * std::sin(phi + 2 * std::numbers::pi * t);
                double qq = q * (1 + 0.5 * std::cos(2 * phi));
                return C + (r - 1) * h + (r - 1) * (r - 1) * qq;
            },
            epsilon};
}

/// Weighted-oscillator collar on the round S^3 with the rates (1 + eps, 1 - eps)
/// of the Katok deformation: h(b) = (1+eps)|b_1|^2 + (1-eps)|b_2|^2 and a
/// quadratic term eps (|b_1|^2 - |b_2|^2).
inline CollarHamiltonian katok_collar_s3(double eps = 0.3, double C = 0.0, double epsilon = 0.9)
{
    return {ContactBoundary::sphere3(),
            [=](double r, const Vector& b, double) {
                double a1 = b(0) * b(0) + b(1) * b(1), a2 = b(2) * b(2) + b(3) * b(3);
                double h = (1 + eps) * a1 + (1 - eps) * a2;
                return C + (r - 1) * h + 0.5 * (r - 1) * (r - 1) * eps * (a1 - a2);
            },
            epsilon};
}

// ---------------------------------------------------------------------------
// Fibered Dehn twist on the page D*S^1 with caps B x [0, 1]

namespace detail {

/// Quintic smoothstep from 0 at a to 1 at b, and its derivative.
inline double step(double x, double a, double b)
{
    double u = std::clamp((x - a) / (b - a), 0.0, 1.0);
    return u * u * u * (10 - 15 * u + 6 * u * u);
}
inline double step_d(double x, double a, double b)
{
    double u = (x - a) / (b - a);
    if (u <= 0 || u >= 1)
        return 0.0;
    return 30 * u * u * (1 - u) * (1 - u) / (b - a);
}
/// Integral of the quintic smoothstep over [0, u], u in [0, 1].
inline double step_integral(double u) { return u * u * u * u * (2.5 - 3 * u + u * u); }

} // namespace detail

/// Profiles of the fibered Dehn twist. f'(r) = -2 pi on [3/4, 1] and 0 on
/// [0, 1/2]; h1 blends 2 - rho^2 into 2 - rho over [1/4, 3/4]; h2 is
/// (l + eps) rho^2 near 0, saturates at (l + eps) 0.16 by rho = 0.4 and
/// blends into k over [1/2, 9/10]. Then h2/h1 is increasing for every k >= 1.
struct DehnTwistProfile
{
    int k = 1;
    int ell = 1;
    double eps = 0.5;

    double df(double r) const { return -2 * std::numbers::pi * detail::step(r, 0.5, 0.75); }
    double f(double r) const
    {
        const double tp = 2 * std::numbers::pi;
        if (r <= 0.5)
            return 0.0;
        if (r <= 0.75)
            return -tp * 0.25 * detail::step_integral((r - 0.5) / 0.25);
        return -tp * 0.25 * 0.5 - tp * (r - 0.75);
    }

    double h1(double rho) const
    {
        double s = detail::step(rho, 0.25, 0.75);
        return (1 - s) * (2 - rho * rho) + s * (2 - rho);
    }
    double dh1(double rho) const
    {
        double s = detail::step(rho, 0.25, 0.75), ds = detail::step_d(rho, 0.25, 0.75);
        return -(1 - s) * 2 * rho - s - ds * (rho - rho * rho);
    }

    double base(double rho) const
    {
        double s = detail::step(rho, 0.2, 0.4);
        return (ell + eps) * ((1 - s) * rho * rho + s * 0.16);
    }
    double dbase(double rho) const
    {
        double s = detail::step(rho, 0.2, 0.4), ds = detail::step_d(rho, 0.2, 0.4);
        return (ell + eps) * ((1 - s) * 2 * rho + ds * (0.16 - rho * rho));
    }
    double h2(double rho) const
    {
        double s = detail::step(rho, 0.5, 0.9);
        return (1 - s) * base(rho) + s * k;
    }
    double dh2(double rho) const
    {
        double s = detail::step(rho, 0.5, 0.9), ds = detail::step_d(rho, 0.5, 0.9);
        return (1 - s) * dbase(rho) + ds * (k - base(rho));
    }

    /// -h2'/h1', with its limit l + eps at rho = 0.
    double ratio(double rho) const { return rho < 1e-9 ? ell + eps : -dh2(rho) / dh1(rho); }

    /// rho with h1(rho) = r for r in [1, 2].
    double rho_of(double r) const
    {
        if (r < 1 - 1e-12 || r > 2 + 1e-12)
            throw DomainError("cap radius outside [1, 2]");
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 80; ++i) {
            double m = 0.5 * (lo + hi);
            (h1(m) > r ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    }

    void validate() const
    {
        if (k < 1)
            throw ValidationError("Dehn twist power k must be at least 1");
        if (ell < 0)
            throw ValidationError("l must be non-negative");
        if (!(eps > 0 && eps < 1))
            throw ValidationError("eps must lie in (0, 1)");
        const double tp = 2 * std::numbers::pi;
        if (std::abs(f(0.5)) > 1e-14 || std::abs(df(1.0) + tp) > 1e-14 || std::abs(df(0.9) + tp) > 1e-14)
            throw ValidationError("f must vanish at 1/2 and have slope -2 pi near 1");
        for (int i = 1; i <= 1000; ++i) {
            double x = i / 1000.0;
            if (df(x) < -tp - 1e-12 || df(x) > 0)
                throw ValidationError("f must be decreasing with f' >= -2 pi");
            if (!(dh1(x) < 0))
                throw ValidationError("h1' must be negative away from rho = 0");
            if (!(h1(x) * dh2(x) - h2(x) * dh1(x) > 0))
                throw ValidationError("profiles violate the contact condition h1 h2' - h2 h1' > 0");
        }
        for (double x : {0.01, 0.1, 0.19})
            if (std::abs(h1(x) - (2 - x * x)) > 1e-14 || std::abs(ratio(x) - (ell + eps)) > 1e-12)
                throw ValidationError("profiles must satisfy h1 = 2 - rho^2 and -h2'/h1' = l + eps near 0");
        for (double x : {0.91, 0.95, 1.0})
            if (std::abs(h2(x) - k) > 1e-14 || std::abs(h1(x) - (2 - x)) > 1e-14)
                throw ValidationError("profiles must satisfy h2 = k and h1 = 2 - rho near 1");
    }
};

/// Page point: |s| <= 1 lies in W = D*S^1 with p = s and q = phi; |s| > 1
/// lies in the cap glued at p = sign(s), with rho = 2 - |s| (binding at rho = 0).
/// phi is the Reeb-time coordinate of alpha = p dq on that end, so it
/// advances along +q at p = 1 and along -q at p = -1.
struct PagePoint
{
    double s = 0.0;
    double phi = 0.0;
};

struct DehnImage
{
    PagePoint image;
    double angle = 0.0; // Reeb-time displacement, continuous lift
};

/// tau_k: identity on |p| <= 1/2, Reeb rotation by k f'(|p|) on the W
/// collar, Reeb rotation by -2 pi h2'/h1' on the cap.
inline DehnImage dehn_twist_return_map(const DehnTwistProfile& prof, const PagePoint& x)
{
    const double a = std::abs(x.s);
    if (a > 2 + 1e-12)
        throw DomainError("page coordinate outside [-2, 2]");
    double angle = 0.0;
    if (a <= 1)
        angle = prof.k * prof.df(a);
    else
        angle = 2 * std::numbers::pi * prof.ratio(std::max(0.0, 2 - a));
    double dir = x.s < 0 ? -1.0 : 1.0; // Reeb direction in q on this end
    return {{x.s, x.phi + dir * angle}, angle};
}

/// Generating slope on W_2: k f'(r) on r <= 1 and -2 pi (h2'/h1' + k) at
/// rho = h1^{-1}(r) on [1, 2]; continuous at r = 1 since h2'(1) = 0.
inline double dehn_generating_slope(const DehnTwistProfile& prof, double r)
{
    if (r <= 1)
        return prof.k * prof.df(r);
    double rho = prof.rho_of(std::min(r, 2.0));
    return 2 * std::numbers::pi * (prof.ratio(rho) - prof.k);
}

/// phi_k tau_k phi_k^{-1} on the cap region of W_2: (r, phi) -> (r, phi + angle).
inline DehnImage dehn_conjugated_map(const DehnTwistProfile& prof, double r, double phi)
{
    double rho = prof.rho_of(r);
    double angle = 2 * std::numbers::pi * prof.ratio(rho);
    return {{2 - rho, phi + angle}, angle};
}

/// H_k on W_2 normalised by H_k(2) = 0 (Simpson quadrature of the slope).
inline double dehn_generating_hamiltonian(const DehnTwistProfile& prof, double r, int panels = 64)
{
    double a = 2.0, b = r, h = (b - a) / (2 * panels), sum = 0.0;
    if (h == 0)
        return 0.0;
    for (int i = 0; i <= 2 * panels; ++i) {
        double w = (i == 0 || i == 2 * panels) ? 1 : (i % 2 ? 4 : 2);
        sum += w * dehn_generating_slope(prof, a + i * h);
    }
    return sum * h / 3;
}

/// Collar of W_2 at r = 2 in the rescaled coordinate r~ = r/2, where
/// lambda = r dphi = r~ (2 dphi); the boundary form is 2 dphi.
inline CollarHamiltonian dehn_collar(const DehnTwistProfile& prof)
{
    return {ContactBoundary::circle(4.0),
            [prof](double rt, const Vector&, double) { return dehn_generating_hamiltonian(prof, 2 * rt); }, 0.2};
}

struct DehnVerdict
{
    int k = 0;
    int ell = 0;
    double eps = 0.0;
    double boundary_slope = 0.0; // 2 pi (l + eps - k)
    TwistVerdict twist;
};

inline DehnVerdict dehn_twist_verdict(const DehnTwistProfile& prof, int samples = 8, std::uint64_t seed = 3)
{
    prof.validate();
    CollarHamiltonian c = dehn_collar(prof);
    DehnVerdict v{prof.k, prof.ell, prof.eps, dehn_generating_slope(prof, 2.0), {}};
    v.twist = twist_condition_check(c, boundary_samples(c.boundary, samples, seed, false));
    return v;
}

} // namespace sympath


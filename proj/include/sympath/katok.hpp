#pragma once

// Brieskorn model of the Katok perturbations of the round geodesic flow:
// Sigma = {sum z_j^2 = 0} in the unit sphere of C^{n+1}, contact form
// alpha_eps = H_eps^{-1} sum (x dy - y dx), written in the unitary w-chart.
// Time is measured in the units of the closed-form flow exp(2 pi i t r_k),
// so the page return time is 1.

#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "flow.hpp"

namespace sympath {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Real layout (x0, y0, x1, y1, ...) of a complex vector.
inline Vector to_real(const CVector& w)
{
    Vector x(2 * w.size());
    for (int k = 0; k < w.size(); ++k) {
        x(2 * k) = w(k).real();
        x(2 * k + 1) = w(k).imag();
    }
    return x;
}

inline CVector to_complex(const Vector& x)
{
    CVector w(x.size() / 2);
    for (int k = 0; k < w.size(); ++k)
        w(k) = Complex(x(2 * k), x(2 * k + 1));
    return w;
}

struct KatokParams
{
    int n = 3;
    std::vector<double> eps{0.3};
    bool independent = true; // declared by the user, never certified

    int m() const { return n / 2; }
    bool odd() const { return n % 2 == 1; }
    /// Complex coordinates w_0..w_{2m+1}; w_0 is unused (zero) for even n,
    /// so n + 1 coordinates are live in both cases.
    int size() const { return 2 * m() + 2; }

    void validate() const
    {
        if (n < 2)
            throw ValidationError("Katok examples need n >= 2");
        if (static_cast<int>(eps.size()) != m())
            throw ValidationError("Katok examples need n/2 perturbation weights");
        for (double e : eps)
            if (!(std::abs(e) < 1.0))
                throw ValidationError("Katok weights must lie in (-1, 1)");
    }

    /// Phase rate of w_k relative to the unperturbed flow.
    double rate(int k) const
    {
        if (k < 2)
            return 1.0;
        int j = k / 2;
        return k % 2 == 0 ? 1.0 + eps[j - 1] : 1.0 - eps[j - 1];
    }

    /// Rate of w_k under the return-map generator X.
    double twist_rate(int k) const { return rate(k) - 1.0; }
};

namespace katok {

/// Unitary change of chart z -> w.
inline CVector w_from_z(const KatokParams& p, const CVector& z)
{
    const double s = std::numbers::sqrt2 / 2;
    const Complex i(0, 1);
    CVector w = CVector::Zero(p.size());
    int off = p.odd() ? 0 : 1; // even n: z indexes w_1..w_n
    for (int k = 0; k < z.size(); ++k) {
        int wk = k + off;
        if (wk < 2)
            w(wk) = z(k);
    }
    for (int j = 1; j <= p.m(); ++j) {
        Complex a = z(2 * j - off), b = z(2 * j + 1 - off);
        w(2 * j) = s * (a + i * b);
        w(2 * j + 1) = i * s * (a - i * b);
    }
    return w;
}

inline double h_eps(const KatokParams& p, const CVector& w)
{
    double h = 0.0;
    for (int k = 0; k < p.size(); ++k)
        h += p.rate(k) * std::norm(w(k));
    return h;
}

inline double delta_eps(const KatokParams& p, const CVector& w)
{
    double d = 0.0;
    for (int k = 2; k < p.size(); ++k)
        d += p.twist_rate(k) * std::norm(w(k));
    return d;
}

/// |sum z^2| in the w-chart and | |w|^2 - 1 |.
struct ConstraintResidual
{
    double quadric;
    double sphere;
    double max() const { return std::max(quadric, sphere); }
};

inline ConstraintResidual constraints(const KatokParams& p, const CVector& w)
{
    const Complex i(0, 1);
    Complex q = w(1) * w(1);
    if (p.odd())
        q += w(0) * w(0);
    for (int j = 1; j <= p.m(); ++j)
        q -= 2.0 * i * w(2 * j) * w(2 * j + 1);
    return {std::abs(q), std::abs(w.squaredNorm() - 1.0)};
}

inline void require_on_sigma(const KatokParams& p, const CVector& w, double tol = 1e-9)
{
    if (w.size() != p.size())
        throw ValidationError("point has the wrong number of coordinates");
    if (constraints(p, w).max() > tol)
        throw ValidationError("point is not on the Brieskorn manifold");
    if (!p.odd() && std::abs(w(0)) > tol)
        throw ValidationError("w0 must vanish for even n");
}

/// Closed-form Reeb flow.
inline CVector flow(const KatokParams& p, const CVector& w, double t)
{
    CVector out = w;
    for (int k = 0; k < p.size(); ++k)
        out(k) *= std::polar(1.0, 2 * std::numbers::pi * t * p.rate(k));
    return out;
}

/// The Reeb field as a real linear field on C^{n+1}.
inline VectorFieldSpec reeb_field(const KatokParams& p)
{
    Matrix a = Matrix::Zero(2 * p.size(), 2 * p.size());
    for (int k = 0; k < p.size(); ++k) {
        double r = 2 * std::numbers::pi * p.rate(k);
        a(2 * k, 2 * k + 1) = -r;
        a(2 * k + 1, 2 * k) = r;
    }
    return linear_field(a);
}

/// Uniform-in-construction point of Sigma: z = (u + i v)/sqrt(2) with u, v
/// orthonormal in R^{n+1}.
inline CVector random_point(const KatokParams& p, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    int dim = p.n + 1;
    Vector u(dim), v(dim);
    for (int k = 0; k < dim; ++k) {
        u(k) = nd(rng);
        v(k) = nd(rng);
    }
    u.normalize();
    v -= v.dot(u) * u;
    v.normalize();
    CVector z(dim);
    for (int k = 0; k < dim; ++k)
        z(k) = Complex(u(k), v(k)) / std::numbers::sqrt2;
    return w_from_z(p, z);
}

struct Orbit
{
    std::string label;
    CVector point;
    double period;
};

struct OrbitCatalog
{
    std::vector<Orbit> orbits;
    bool completeness_asserted = false;
    bool independence_declared = false;
};

inline OrbitCatalog orbit_catalog(const KatokParams& p)
{
    p.validate();
    OrbitCatalog c;
    c.independence_declared = p.independent;
    c.completeness_asserted = p.independent && p.odd();
    const Complex i(0, 1);
    const double s = std::numbers::sqrt2 / 2;
    if (p.odd()) {
        CVector g = CVector::Zero(p.size()), b = CVector::Zero(p.size());
        g(0) = s;
        g(1) = i * s;
        b(0) = s;
        b(1) = -i * s;
        c.orbits.push_back({"gamma_0", g, 1.0});
        c.orbits.push_back({"beta_0", b, 1.0});
    }
    for (int j = 1; j <= p.m(); ++j) {
        CVector g = CVector::Zero(p.size()), b = CVector::Zero(p.size());
        g(2 * j) = 1.0;
        b(2 * j + 1) = 1.0;
        c.orbits.push_back({"gamma_" + std::to_string(j), g, 1.0 / (1.0 + p.eps[j - 1])});
        c.orbits.push_back({"beta_" + std::to_string(j), b, 1.0 / (1.0 - p.eps[j - 1])});
    }
    return c;
}

/// Smallest |Fl_t(w) - w| over t in [t_min, t_max]: a fine scan followed by
/// golden-section polishing of every local minimum.
inline std::pair<double, double> closest_return(const KatokParams& p, const CVector& w, double t_max,
                                                double t_min = 0.05, double dt = 1e-3)
{
    auto dist = [&](double t) {
        double d = 0.0;
        for (int k = 0; k < p.size(); ++k) {
            double s = std::sin(std::numbers::pi * t * p.rate(k));
            d += std::norm(w(k)) * 4.0 * s * s;
        }
        return std::sqrt(d);
    };
    double best_t = t_min, best = dist(t_min);
    int n = static_cast<int>(std::ceil((t_max - t_min) / dt));
    double prev2 = dist(t_min), prev = dist(t_min + dt);
    for (int k = 2; k <= n; ++k) {
        double t = t_min + k * dt, cur = dist(t);
        if (prev <= prev2 && prev <= cur) {
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double lo = t - 2 * dt, hi = t;
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = dist(x1), f2 = dist(x2);
            while (hi - lo > 1e-13) {
                if (f1 <= f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - g * (hi - lo);
                    f1 = dist(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + g * (hi - lo);
                    f2 = dist(x2);
                }
            }
            double tm = 0.5 * (lo + hi), fm = dist(tm);
            if (fm < best) {
                best = fm;
                best_t = tm;
            }
        }
        if (cur < best) {
            best = cur;
            best_t = t;
        }
        prev2 = prev;
        prev = cur;
    }
    return {best_t, best};
}

/// Distance from w to the closed orbit through o (minimised over phase).
inline double distance_to_orbit(const KatokParams& p, const CVector& w, const Orbit& o)
{
    double best = (w - o.point).norm();
    const int n = 2000;
    for (int k = 1; k < n; ++k)
        best = std::min(best, (w - flow(p, o.point, o.period * k / n)).norm());
    return best;
}

struct OrbitScan
{
    std::size_t samples = 0;
    std::size_t returns_off_catalog = 0;
    double min_return_distance = 0.0; // over points off the catalog
};

/// Looks for closed orbits through random points of Sigma.
inline OrbitScan scan_for_returns(const KatokParams& p, std::size_t samples, double t_max, double tol,
                                  std::uint64_t seed)
{
    auto cat = orbit_catalog(p);
    std::mt19937_64 rng(seed);
    OrbitScan s;
    s.samples = samples;
    s.min_return_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        CVector w = random_point(p, rng);
        auto [t, d] = closest_return(p, w, t_max);
        bool on_catalog = false;
        for (const auto& o : cat.orbits)
            on_catalog = on_catalog || distance_to_orbit(p, w, o) < 1e-6;
        if (on_catalog)
            continue;
        s.min_return_distance = std::min(s.min_return_distance, d);
        if (d < tol)
            ++s.returns_off_catalog;
    }
    return s;
}

// Page P_0 = {w_0 real positive} for odd n.

inline void require_on_page(const KatokParams& p, const CVector& w, double tol = 1e-9)
{
    if (!p.odd())
        throw ValidationError("the page P_0 is defined through w_0, which needs odd n");
    require_on_sigma(p, w, tol);
    if (std::abs(w(0).imag()) > tol || w(0).real() < -tol)
        throw ValidationError("point is not on the page P_0 (w_0 must be real and non-negative)");
}

/// Page point from cotangent-disk data: v unit in R^n, q in R^n orthogonal
/// to v with |q| <= 1; u = (sqrt(1 - |q|^2), q), z = (u + i (0, v))/sqrt 2.
inline CVector page_point(const KatokParams& p, const Vector& v, const Vector& q)
{
    if (!p.odd())
        throw ValidationError("the page P_0 is defined through w_0, which needs odd n");
    int dim = p.n + 1;
    double qq = q.squaredNorm();
    if (qq > 1.0 + 1e-12)
        throw DomainError("cotangent vector outside the unit disk bundle");
    CVector z(dim);
    z(0) = Complex(std::sqrt(std::max(0.0, 1.0 - qq)), 0.0);
    for (int k = 1; k < dim; ++k)
        z(k) = Complex(q(k - 1), v(k - 1));
    z /= std::numbers::sqrt2;
    return w_from_z(p, z);
}

inline CVector random_page_point(const KatokParams& p, std::mt19937_64& rng, double max_radius = 0.999)
{
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    Vector v(p.n), q(p.n);
    for (int k = 0; k < p.n; ++k) {
        v(k) = nd(rng);
        q(k) = nd(rng);
    }
    v.normalize();
    q -= q.dot(v) * v;
    q *= max_radius * std::sqrt(ud(rng)) / q.norm();
    return page_point(p, v, q);
}

/// Return map of P_0: w_{2j} -> e^{2 pi i eps_j} w_{2j}, w_{2j+1} -> e^{-2 pi i eps_j} w_{2j+1}.
inline CVector page_return_map(const KatokParams& p, const CVector& w)
{
    require_on_page(p, w, 1e-8);
    CVector out = w;
    for (int k = 2; k < p.size(); ++k)
        out(k) *= std::polar(1.0, 2 * std::numbers::pi * p.twist_rate(k));
    return out;
}

inline CVector p0(const KatokParams& p)
{
    return orbit_catalog(p).orbits.at(0).point;
}

inline CVector q0(const KatokParams& p)
{
    return orbit_catalog(p).orbits.at(1).point;
}

/// Chart of P_0 for n = 3: (theta, phi) place v on S^2 and (a, b) give
/// q = rho(a, b) (a e_theta + b e_phi)/|(a, b)| with rho = |(a,b)|/sqrt(1+|(a,b)|^2) < 1.
inline CVector page_chart(const KatokParams& p, const Eigen::Vector4d& s)
{
    if (p.n != 3)
        throw ValidationError("the cotangent-disk chart is implemented for n = 3");
    double th = s(0), ph = s(1);
    Vector v(3), et(3), ep(3);
    v << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
    et << std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th);
    ep << -std::sin(ph), std::cos(ph), 0.0;
    double r = std::hypot(s(2), s(3));
    Vector q = (s(2) * et + s(3) * ep) / std::sqrt(1.0 + r * r);
    return page_point(p, v, q);
}

struct FixedPoint
{
    CVector point;
    int period;
    double residual;
};

/// Grid-and-refine search for points of P_0 with Phi^k(p) = p, k <= k_max.
/// Grid minima are polished by Levenberg-Marquardt on Phi^k(p) - p and
/// clustered at distance `resolution`; this is a search certificate only.
inline std::vector<FixedPoint> periodic_point_search(const KatokParams& p, int k_max, double resolution = 1e-2,
                                                     int grid = 12, double accept = 1e-9)
{
    p.validate();
    if (p.n != 3)
        throw ValidationError("periodic point search is implemented for n = 3");
    struct Residual : Eigen::DenseFunctor<double>
    {
        const KatokParams* kp;
        int k;
        Residual(const KatokParams* q, int kk) : Eigen::DenseFunctor<double>(4, 8), kp(q), k(kk) {}
        int operator()(const Eigen::VectorXd& s, Eigen::VectorXd& f) const
        {
            CVector w = page_chart(*kp, s.head<4>());
            CVector img = w;
            for (int i = 0; i < k; ++i)
                img = page_return_map(*kp, img);
            f = to_real(img - w);
            return 0;
        }
    };
    std::vector<FixedPoint> found;
    const double pi = std::numbers::pi;
    for (int k = 1; k <= k_max; ++k) {
        Residual fn(&p, k);
        Eigen::NumericalDiff<Residual> nd(fn);
        // Grid values, then local minima over the (theta, phi, a, b) lattice.
        std::vector<std::pair<double, Eigen::Vector4d>> seeds;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < 2 * grid; ++j)
                for (int a = 0; a < 5; ++a)
                    for (int b = 0; b < 5; ++b) {
                        Eigen::Vector4d s(pi * (i + 0.5) / grid, pi * j / grid, -1.0 + 0.5 * a, -1.0 + 0.5 * b);
                        Eigen::VectorXd f(8);
                        fn(s, f);
                        seeds.push_back({f.norm(), s});
                    }
        std::sort(seeds.begin(), seeds.end(), [](auto& x, auto& y) { return x.first < y.first; });
        std::size_t keep = std::min<std::size_t>(seeds.size(), 64);
        for (std::size_t i = 0; i < keep; ++i) {
            Eigen::VectorXd s = seeds[i].second;
            Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residual>> lm(nd);
            lm.setMaxfev(2000);
            lm.setXtol(1e-14);
            lm.setFtol(1e-14);
            lm.minimize(s);
            Eigen::VectorXd f(8);
            fn(s, f);
            if (f.norm() > accept)
                continue;
            CVector w = page_chart(p, s.head<4>());
            bool dup = false;
            for (const auto& fp : found)
                dup = dup || (fp.point - w).norm() < resolution;
            if (!dup)
                found.push_back({w, k, f.norm()});
        }
    }
    return found;
}

/// Section {Im w_0 = 0, Re w_0 > 0} for the numerical first return.
inline SectionSpec page_section()
{
    return {[](const Vector& x) { return x(1); }, [](const Vector& x) { return x(0) > 0.0; },
            [](const Vector& x) {
                Vector g = Vector::Zero(x.size());
                g(1) = 1.0;
                return g;
            }};
}

// Forms on C^{n+1} in real layout. alpha = sum (x dy - y dx) = omega0(w, .).

inline double alpha(const Vector& w, const Vector& v) { return omega0(w, v); }

inline Vector grad_h_eps(const KatokParams& p, const Vector& w)
{
    Vector g(w.size());
    for (int k = 0; k < p.size(); ++k) {
        g(2 * k) = 2 * p.rate(k) * w(2 * k);
        g(2 * k + 1) = 2 * p.rate(k) * w(2 * k + 1);
    }
    return g;
}

inline Vector grad_delta_eps(const KatokParams& p, const Vector& w)
{
    Vector g(w.size());
    for (int k = 0; k < p.size(); ++k) {
        g(2 * k) = 2 * p.twist_rate(k) * w(2 * k);
        g(2 * k + 1) = 2 * p.twist_rate(k) * w(2 * k + 1);
    }
    return g;
}

/// alpha_eps = H_eps^{-1} alpha.
inline double alpha_eps(const KatokParams& p, const Vector& w, const Vector& v)
{
    return alpha(w, v) / h_eps(p, to_complex(w));
}

/// d alpha_eps(a, b) = (dH^{-1} ^ alpha)(a, b) + H^{-1} 2 omega0(a, b).
inline double dalpha_eps(const KatokParams& p, const Vector& w, const Vector& a, const Vector& b)
{
    double h = h_eps(p, to_complex(w));
    Vector dinv = -grad_h_eps(p, w) / (h * h);
    return dinv.dot(a) * alpha(w, b) - dinv.dot(b) * alpha(w, a) + 2.0 * omega0(a, b) / h;
}

/// Generator X of the return map (its 2 pi flow is Phi).
inline Vector twist_generator(const KatokParams& p, const Vector& w)
{
    Vector x = Vector::Zero(w.size());
    for (int k = 2; k < p.size(); ++k) {
        double r = p.twist_rate(k);
        x(2 * k) = -r * w(2 * k + 1);
        x(2 * k + 1) = r * w(2 * k);
    }
    return x;
}

/// K = H_eps^{-1} Delta_eps and its gradient.
inline double generating_hamiltonian(const KatokParams& p, const CVector& w)
{
    return delta_eps(p, w) / h_eps(p, w);
}

inline Vector grad_generating_hamiltonian(const KatokParams& p, const Vector& w)
{
    CVector c = to_complex(w);
    double h = h_eps(p, c), d = delta_eps(p, c);
    return (grad_delta_eps(p, w) * h - d * grad_h_eps(p, w)) / (h * h);
}

/// sup |iota_X d alpha_eps (v) + dK(v)| over the supplied (point, vector) pairs.
inline double generating_hamiltonian_residual(const KatokParams& p, const std::vector<CVector>& pts,
                                              const std::vector<Vector>& vecs)
{
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Vector w = to_real(pts[i]);
        double lhs = dalpha_eps(p, w, twist_generator(p, w), vecs[i]);
        double rhs = -grad_generating_hamiltonian(p, w).dot(vecs[i]);
        sup = std::max(sup, std::abs(lhs - rhs));
    }
    return sup;
}

/// Tangent vectors of Sigma at w: a basis of the kernel of the constraint
/// differentials (quadric real and imaginary parts, sphere).
inline Matrix tangent_basis(const KatokParams& p, const CVector& w)
{
    const int d = 2 * p.size();
    const Complex i(0, 1);
    // Complex gradient of the quadric q(w): dq = sum c_k dw_k.
    CVector c = CVector::Zero(p.size());
    if (p.odd())
        c(0) = 2.0 * w(0);
    c(1) = 2.0 * w(1);
    for (int j = 1; j <= p.m(); ++j) {
        c(2 * j) = -2.0 * i * w(2 * j + 1);
        c(2 * j + 1) = -2.0 * i * w(2 * j);
    }
    // Rows: d Re q, d Im q, d|w|^2 (and dw_0 for even n).
    int rows = p.odd() ? 3 : 5;
    Matrix dc = Matrix::Zero(rows, d);
    for (int k = 0; k < p.size(); ++k) {
        // dq(v) = c_k (vx + i vy)
        dc(0, 2 * k) = c(k).real();
        dc(0, 2 * k + 1) = -c(k).imag();
        dc(1, 2 * k) = c(k).imag();
        dc(1, 2 * k + 1) = c(k).real();
        dc(2, 2 * k) = 2 * w(k).real();
        dc(2, 2 * k + 1) = 2 * w(k).imag();
    }
    if (!p.odd()) {
        dc(3, 0) = 1.0;
        dc(4, 1) = 1.0;
    }
    Eigen::JacobiSVD<Matrix> svd(dc, Eigen::ComputeFullV);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        rank += svd.singularValues()(k) > 1e-10;
    return svd.matrixV().rightCols(d - rank);
}

/// Covering S^3 -> Sigma^3 (n = 2, w-chart (w_1, w_2, w_3)).
inline CVector covering(const CVector& z)
{
    const Complex i(0, 1);
    CVector w = CVector::Zero(4);
    w(1) = std::numbers::sqrt2 * z(0) * z(1);
    w(2) = z(0) * z(0);
    w(3) = -i * z(1) * z(1);
    return w;
}

inline CVector covering_differential(const CVector& z, const CVector& dz)
{
    const Complex i(0, 1);
    CVector dw = CVector::Zero(4);
    dw(1) = std::numbers::sqrt2 * (dz(0) * z(1) + z(0) * dz(1));
    dw(2) = 2.0 * z(0) * dz(0);
    dw(3) = -2.0 * i * z(1) * dz(1);
    return dw;
}

struct CoveringReport
{
    double constraint_residual = 0.0;
    double pullback_residual = 0.0;
    double antipodal_residual = 0.0;
    std::size_t samples = 0;
};

/// Checks the covering S^3 -> Sigma^3 and the weighted form of pi^* alpha_eps
/// at random points and tangent vectors.
inline CoveringReport covering_check(double eps, std::size_t samples, std::uint64_t seed)
{
    KatokParams p{2, {eps}, true};
    p.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CoveringReport r;
    r.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        Vector zr(4), vr(4);
        for (int k = 0; k < 4; ++k) {
            zr(k) = nd(rng);
            vr(k) = nd(rng);
        }
        zr.normalize();
        vr -= vr.dot(zr) * zr;
        CVector z = to_complex(zr), v = to_complex(vr);
        CVector w = covering(z);
        r.constraint_residual = std::max(r.constraint_residual, constraints(p, w).max());
        r.antipodal_residual = std::max(r.antipodal_residual, (covering(-z) - w).norm());
        Vector wr = to_real(w), dw = to_real(covering_differential(z, v));
        double pulled = alpha_eps(p, wr, dw);
        double printed = 2.0 / ((1 + eps) * std::norm(z(0)) + (1 - eps) * std::norm(z(1))) * omega0(zr, vr);
        r.pullback_residual = std::max(r.pullback_residual, std::abs(pulled - printed));
    }
    return r;
}

} // namespace katok

/// Weighted forms on S^{2n-1}: beta_0 = alpha / sum a_k |z_k|^2 and
/// beta_1 = sum (1/a_j)(x_j dy_j - y_j dx_j), with alpha = sum (x dy - y dx).
namespace weighted {

inline double norm_a(const Vector& a, const Vector& z)
{
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j)
        s += a(j) * (z(2 * j) * z(2 * j) + z(2 * j + 1) * z(2 * j + 1));
    return s;
}

inline Vector grad_norm_a(const Vector& a, const Vector& z)
{
    Vector g(z.size());
    for (int j = 0; j < a.size(); ++j) {
        g(2 * j) = 2 * a(j) * z(2 * j);
        g(2 * j + 1) = 2 * a(j) * z(2 * j + 1);
    }
    return g;
}

inline double beta0(const Vector& a, const Vector& z, const Vector& v) { return omega0(z, v) / norm_a(a, z); }

inline double beta1(const Vector& a, const Vector& z, const Vector& v)
{
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j)
        s += (z(2 * j) * v(2 * j + 1) - z(2 * j + 1) * v(2 * j)) / a(j);
    return s;
}

inline double dbeta0(const Vector& a, const Vector& z, const Vector& u, const Vector& v)
{
    double n = norm_a(a, z);
    Vector dn = grad_norm_a(a, z);
    return -(dn.dot(u) * omega0(z, v) - dn.dot(v) * omega0(z, u)) / (n * n) + 2.0 * omega0(u, v) / n;
}

inline double dbeta1(const Vector& a, const Vector& u, const Vector& v)
{
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j)
        s += 2.0 * (u(2 * j) * v(2 * j + 1) - u(2 * j + 1) * v(2 * j)) / a(j);
    return s;
}

/// R = sum a_j (x_j d/dy_j - y_j d/dx_j).
inline Vector reeb(const Vector& a, const Vector& z)
{
    Vector r(z.size());
    for (int j = 0; j < a.size(); ++j) {
        r(2 * j) = -a(j) * z(2 * j + 1);
        r(2 * j + 1) = a(j) * z(2 * j);
    }
    return r;
}

/// psi(z)_j = sqrt(a_j / N(z)) z_j and its differential.
inline Vector psi(const Vector& a, const Vector& z)
{
    double n = norm_a(a, z);
    Vector out(z.size());
    for (int j = 0; j < a.size(); ++j) {
        double c = std::sqrt(a(j) / n);
        out(2 * j) = c * z(2 * j);
        out(2 * j + 1) = c * z(2 * j + 1);
    }
    return out;
}

inline Vector dpsi(const Vector& a, const Vector& z, const Vector& v)
{
    double n = norm_a(a, z);
    double dn = grad_norm_a(a, z).dot(v);
    Vector out(z.size());
    for (int j = 0; j < a.size(); ++j) {
        double c = std::sqrt(a(j) / n);
        double dc = -0.5 * std::sqrt(a(j)) * std::pow(n, -1.5) * dn;
        out(2 * j) = c * v(2 * j) + dc * z(2 * j);
        out(2 * j + 1) = c * v(2 * j + 1) + dc * z(2 * j + 1);
    }
    return out;
}

struct ContactomorphismReport
{
    double pullback_residual = 0.0; // |(psi^* beta_1 - beta_0)(v)|
    double reeb_normalisation = 0.0; // |beta_k(R) - 1|
    double reeb_kernel = 0.0;        // |d beta_k(R, w)| for tangent w
    double sphere_residual = 0.0;    // | |psi(z)| - 1 |
};

inline ContactomorphismReport contactomorphism_check(const Vector& a, const Vector& z, const Vector& v)
{
    for (int j = 0; j < a.size(); ++j)
        if (!(a(j) > 0.0))
            throw ValidationError("weights must be positive");
    if (z.size() != 2 * a.size())
        throw ValidationError("point and weights disagree in dimension");
    if (std::abs(z.norm() - 1.0) > 1e-9)
        throw ValidationError("point must lie on the unit sphere");
    Vector t = v - v.dot(z) * z;
    ContactomorphismReport r;
    Vector pz = psi(a, z);
    r.sphere_residual = std::abs(pz.norm() - 1.0);
    r.pullback_residual = std::abs(beta1(a, pz, dpsi(a, z, t)) - beta0(a, z, t));
    Vector rz = reeb(a, z);
    r.reeb_normalisation = std::max(std::abs(beta0(a, z, rz) - 1.0), std::abs(beta1(a, z, rz) - 1.0));
    r.reeb_kernel = std::max(std::abs(dbeta0(a, z, rz, t)), std::abs(dbeta1(a, rz, t)));
    return r;
}

} // namespace weighted

} // namespace sympath

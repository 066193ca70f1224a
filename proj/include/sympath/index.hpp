#pragma once

// Robbin-Salamon index of symplectic paths, by two independent routes:
//   * crossing forms omega0(v, psi' v) on ker(psi - id), with endpoint
//     half-weights (any dimension);
//   * the lifted KAN angle together with the KAN chart of the endpoint (Sp(2));
//   * spectral flow of the unitary image of the graph Lagrangian (any
//     dimension), which is insensitive to tangential touches of the cycle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "kan.hpp"
#include "path.hpp"

namespace sympath {

struct Crossing
{
    double time = 0.0;
    int kernel_dim = 0;
    int signature = 0;
    bool regular = true;  // crossing form non-degenerate on the kernel
    bool endpoint = false; // located at t = 0 or t = T
    double min_rate = 0.0; // smallest |eigenvalue| of the crossing form per unit |v|^2
};

struct CrossingReport
{
    std::vector<Crossing> crossings;
    bool regularized = true; // false when some crossing is degenerate
};

enum class IndexMethod { crossing_form, kan_winding, spectral_flow };

inline const char* to_string(IndexMethod m)
{
    switch (m) {
    case IndexMethod::crossing_form:
        return "crossing_form";
    case IndexMethod::kan_winding:
        return "kan_winding";
    default:
        return "spectral_flow";
    }
}

struct IndexEstimate
{
    HalfInteger value;
    IndexMethod method = IndexMethod::crossing_form;
    std::size_t grid_points = 0; // evaluation points in the crossing scan
    double regularization = 0.0; // rotation rate of the regularising perturbation
    std::size_t crossing_count = 0;
};

namespace detail {

struct ScanFn
{
    PathEvaluator value;
    PathEvaluator deriv;
    double horizon = 0.0;
};

inline double kernel_threshold(const Matrix& m) { return 1e-6 * std::max(1.0, m.norm()); }

inline Crossing crossing_form(double t, const Matrix& psi, const Matrix& dpsi)
{
    int n = static_cast<int>(psi.rows());
    Matrix shifted = psi - Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double thr = kernel_threshold(psi);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
        if (sv(i) <= thr)
            idx.push_back(i);
    Crossing c;
    c.time = t;
    c.kernel_dim = static_cast<int>(idx.size());
    if (idx.empty())
        return c;
    Matrix basis(n, c.kernel_dim);
    for (int j = 0; j < c.kernel_dim; ++j)
        basis.col(j) = svd.matrixV().col(idx[j]);
    Matrix om = omega_matrix(n);
    Matrix q = basis.transpose() * om * dpsi * basis;
    Matrix sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    double tol = 1e-8 * std::max(1.0, dpsi.norm());
    c.min_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.kernel_dim; ++i) {
        double ev = es.eigenvalues()(i);
        c.min_rate = std::min(c.min_rate, std::abs(ev));
        if (ev > tol)
            ++c.signature;
        else if (ev < -tol)
            --c.signature;
        else
            c.regular = false;
    }
    return c;
}

struct Sample
{
    double t;
    double det;
    double smin;
};

inline Sample sample(const ScanFn& f, double t)
{
    Matrix m = f.value(t);
    Matrix shifted = m - Matrix::Identity(m.rows(), m.cols());
    Eigen::JacobiSVD<Matrix> svd(shifted);
    return {t, shifted.determinant(), svd.singularValues().minCoeff()};
}

inline double bisect_det(const ScanFn& f, double lo, double hi, double dlo)
{
    double tol = 1e-12 * std::max(1.0, f.horizon);
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double dm = sample(f, mid).det;
        if (dm == 0.0)
            return mid;
        if ((dm > 0) == (dlo > 0)) {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::pair<double, double> golden_min(const ScanFn& f, double lo, double hi)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double tol = 1e-12 * std::max(1.0, f.horizon);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = sample(f, x1).smin, f2 = sample(f, x2).smin;
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = sample(f, x1).smin;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = sample(f, x2).smin;
        }
    }
    double x = 0.5 * (lo + hi);
    return {x, sample(f, x).smin};
}

/// Evaluation grid: the path samples subdivided, plus a geometric refinement
/// towards t = 0 where flows leave the identity.
inline std::vector<double> scan_grid(const std::vector<double>& times, int subdivisions)
{
    std::vector<double> g;
    double first = times.size() > 1 ? times[1] : times.back();
    for (int k = 40; k >= 1; --k)
        g.push_back(first / subdivisions * std::ldexp(1.0, -k));
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        for (int s = 0; s < subdivisions; ++s)
            g.push_back(times[i] + (times[i + 1] - times[i]) * s / subdivisions);
    g.push_back(times.back());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.front() != 0.0)
        g.insert(g.begin(), 0.0);
    return g;
}

/// Locates every crossing of f on [0, T]: sign changes of det(f - id) are
/// bisected, and local minima of the smallest singular value of f - id that
/// touch zero without a sign change are polished by golden section.
inline std::vector<Crossing> locate_crossings(const ScanFn& f, const std::vector<double>& grid,
                                              std::size_t* evaluations = nullptr)
{
    std::vector<Sample> s;
    s.reserve(grid.size());
    for (double t : grid)
        s.push_back(sample(f, t));
    const double T = f.horizon;
    const double merge = 1e-8 * std::max(1.0, T);
    std::vector<double> times;
    auto scale_at = [&](double t) { return kernel_threshold(f.value(t)); };

    if (s.front().smin <= scale_at(0.0))
        times.push_back(0.0);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i].det != 0.0 && s[i + 1].det != 0.0 && (s[i].det > 0) != (s[i + 1].det > 0)) {
            double r = bisect_det(f, s[i].t, s[i + 1].t, s[i].det);
            times.push_back(r);
        }
    }
    // Lipschitz exclusion: a zero of smin inside [a, b] forces
    // smin(a) + smin(b) <= L (b - a). Cells that fail the test are halved.
    std::size_t budget = 200000, used = s.size();
    const double min_width = 1e-7 * std::max(1.0, T);
    auto rate = [&](double t) { return f.deriv(t).norm(); };
    std::function<void(const Sample&, const Sample&, double, double)> refine;
    refine = [&](const Sample& a, const Sample& b, double la, double lb) {
        double w = b.t - a.t;
        double thr_a = scale_at(a.t), thr_b = scale_at(b.t);
        if (a.smin <= thr_a && b.smin <= thr_b)
            return; // degenerate stretch, both ends already recorded
        if (a.smin + b.smin > (2.0 * std::max(la, lb) + 1e-9) * w)
            return;
        if (w < min_width) {
            auto [x, v] = golden_min(f, a.t, b.t);
            if (v <= scale_at(x))
                times.push_back(x);
            return;
        }
        if (++used > budget)
            throw ResolutionError("crossing search exceeded its evaluation budget");
        double m = 0.5 * (a.t + b.t);
        Sample sm = sample(f, m);
        double lm = rate(m);
        if (sm.smin <= scale_at(m))
            times.push_back(golden_min(f, a.t, b.t).first);
        refine(a, sm, la, lm);
        refine(sm, b, lm, lb);
    };
    {
        std::vector<double> rates;
        rates.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            rates.push_back(rate(s[i].t));
            if (s[i].smin <= scale_at(s[i].t))
                times.push_back(golden_min(f, s[i == 0 ? 0 : i - 1].t, s[std::min(i + 1, s.size() - 1)].t).first);
        }
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            refine(s[i], s[i + 1], rates[i], rates[i + 1]);
    }
    if (evaluations)
        *evaluations = used;
    if (s.back().smin <= scale_at(T))
        times.push_back(T);

    std::sort(times.begin(), times.end());
    // Candidates joined by a stretch on which f - id stays degenerate are
    // one crossing; an endpoint in the cluster wins, else the deepest point.
    auto joined = [&](double a, double b) {
        if (b - a <= merge)
            return true;
        for (double q : {0.25, 0.5, 0.75}) {
            double t = a + q * (b - a);
            if (sample(f, t).smin > scale_at(t))
                return false;
        }
        return true;
    };
    std::vector<std::vector<double>> clusters;
    for (double t : times) {
        if (!clusters.empty() && joined(clusters.back().back(), t))
            clusters.back().push_back(t);
        else
            clusters.push_back({t});
    }
    std::vector<double> uniq;
    for (const auto& c : clusters) {
        if (c.front() < merge) {
            uniq.push_back(0.0);
        } else if (T - c.back() < merge) {
            uniq.push_back(T);
        } else {
            double best = c.front(), bv = sample(f, best).smin;
            for (double t : c) {
                double v = sample(f, t).smin;
                if (v < bv) {
                    bv = v;
                    best = t;
                }
            }
            uniq.push_back(best);
        }
    }
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::vector<Crossing> out;
    for (double t : uniq) {
        Crossing c = crossing_form(t, f.value(t), f.deriv(t));
        if (c.kernel_dim == 0)
            continue;
        c.endpoint = (t == 0.0 || t == T);
        out.push_back(c);
    }
    return out;
}

inline ScanFn raw_scan(const SymplecticPath& p)
{
    return {[&p](double t) { return p.at(t); }, [&p](double t) { return p.derivative(t); }, p.horizon()};
}

/// exp(delta t I) psi(t): rotates every crossing form by +delta |v|^2.
inline ScanFn regularized_scan(const SymplecticPath& p, double delta)
{
    int n = p.dim();
    Matrix cs = complex_structure(n);
    return {[&p, delta, n](double t) { return Matrix(pair_rotation(n, delta * t) * p.at(t)); },
            [&p, delta, n, cs](double t) {
                Matrix e = pair_rotation(n, delta * t);
                return Matrix(delta * cs * e * p.at(t) + e * p.derivative(t));
            },
            p.horizon()};
}

/// True when theta -> exp(theta I) end has no eigenvalue 1 for theta in (0, |span|].
inline bool connector_clean(const Matrix& end, double span)
{
    int n = static_cast<int>(end.rows());
    const int m = 64;
    double prev_det = 0.0;
    for (int j = 1; j <= m; ++j) {
        double th = span * j / m;
        Matrix e = pair_rotation(n, th) * end - Matrix::Identity(n, n);
        Eigen::JacobiSVD<Matrix> svd(e);
        if (svd.singularValues().minCoeff() < 1e-7 * std::max(1.0, end.norm()))
            return false;
        double d = e.determinant();
        if (j > 1 && (d > 0) != (prev_det > 0))
            return false;
        prev_det = d;
    }
    return true;
}

inline std::int64_t regular_index_halves(const std::vector<Crossing>& cs)
{
    std::int64_t h = 0;
    for (const auto& c : cs)
        h += c.endpoint ? c.signature : 2 * c.signature;
    return h;
}

} // namespace detail

/// Crossings of the raw path with the Maslov cycle {det(psi - id) = 0}.
/// Degenerate crossings (including paths that stay on the cycle) are reported
/// with regular = false.
inline CrossingReport crossings(const SymplecticPath& path, int subdivisions = 4)
{
    auto f = detail::raw_scan(path);
    auto grid = detail::scan_grid(path.times(), subdivisions);
    CrossingReport r;
    auto all = detail::locate_crossings(f, grid);
    // A path lying on the cycle produces a run of degenerate crossings; keep the first.
    for (const auto& c : all) {
        if (!r.crossings.empty() && !r.crossings.back().regular && !c.regular)
            continue;
        r.crossings.push_back(c);
    }
    r.regularized = std::all_of(r.crossings.begin(), r.crossings.end(), [](const Crossing& c) { return c.regular; });
    return r;
}

struct RsIndexOptions
{
    double delta = 1e-3;  // initial regularising rotation rate
    int subdivisions = 4; // scan points per sample interval
    int max_attempts = 8;
};

/// Robbin-Salamon index by crossing forms.
///
/// The path is perturbed to exp(+-delta t I) psi(t). Each perturbed path has
/// only regular crossings and a non-degenerate end, and is homotopic rel
/// endpoints to psi followed by a short rotation of the end, which shifts the
/// index by +-dim ker(psi(T) - id)/2. The mean of the two perturbed indices
/// is therefore exactly the index of psi.
inline IndexEstimate rs_index(const SymplecticPath& path, const RsIndexOptions& opts = {})
{
    const double T = path.horizon();
    const Matrix end = path.back();
    auto grid = detail::scan_grid(path.times(), opts.subdivisions);
    double delta = opts.delta / std::max(1.0, T);
    double last_bad_time = 0.0;
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt, delta *= 0.37) {
        if (!detail::connector_clean(end, delta * T) || !detail::connector_clean(end, -delta * T))
            continue;
        std::int64_t halves[2];
        std::size_t evals = 0, ncross = 0;
        bool ok = true;
        for (int k = 0; k < 2 && ok; ++k) {
            double d = k == 0 ? delta : -delta;
            auto f = detail::regularized_scan(path, d);
            std::size_t e = 0;
            auto cs = detail::locate_crossings(f, grid, &e);
            evals += e;
            ncross += cs.size();
            for (const auto& c : cs)
                if (!c.regular) {
                    ok = false;
                    last_bad_time = c.time;
                }
            halves[k] = detail::regular_index_halves(cs);
        }
        if (!ok)
            continue;
        std::int64_t sum = halves[0] + halves[1];
        if (sum % 2 != 0)
            throw ResolutionError("perturbed indices disagree in parity; refine the path grid");
        IndexEstimate est;
        est.value = HalfInteger::from_halves(sum / 2);
        est.method = IndexMethod::crossing_form;
        est.grid_points = evals;
        est.regularization = delta;
        est.crossing_count = ncross;
        return est;
    }
    throw DegenerateCrossingError(last_bad_time, "could not regularise a degenerate crossing near t=" +
                                                     std::to_string(last_bad_time));
}

/// Robbin-Salamon index on Sp(2) from the lifted KAN angle.
///
/// A path from the identity is homotopic rel endpoints to: the path inside
/// the slice {angle = 0} from id to kan(0, a, t), followed by the rotation
/// theta -> rotation(theta) kan(0, a, t) for theta from 0 to the lifted final
/// angle phi. Along the rotation every passage through the cycle has a
/// positive-definite crossing form, so the index is a signed count of the
/// solutions of tr(rotation(theta) kan(0, a, t)) = 2 in [0, phi], with half
/// weight at the ends, plus -sign(t)/2 when the slice path is a shear.
inline IndexEstimate rs_index_kan(const SymplecticPath& path)
{
    if (path.dim() != 2)
        throw ValidationError("the KAN route needs a path in Sp(2)");
    if ((path.front() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-9)
        throw ValidationError("the KAN route needs a path starting at the identity");
    auto lift = kan_angle_lift(path);
    const double phi = lift.back();
    KanFactors endf = kan_decompose(path.back());
    const double tol = 1e-9;
    const double pi = std::numbers::pi;

    std::int64_t halves = 0;
    bool unit_scale = std::abs(endf.scale - 1.0) < tol;
    if (unit_scale && std::abs(endf.shear) > tol)
        halves += endf.shear > 0 ? -1 : 1;

    if (std::abs(phi) > tol) {
        double K = endf.scale + 1.0 / endf.scale;
        double L = endf.scale * endf.shear;
        double rho = std::hypot(K, L);
        bool identity_slice = unit_scale && std::abs(endf.shear) < tol;
        std::vector<std::pair<double, int>> roots; // (theta mod 2pi base, weight)
        if (identity_slice) {
            roots.push_back({0.0, 2});
        } else {
            double th0 = std::atan2(L, K);
            double beta = std::acos(std::clamp(2.0 / rho, -1.0, 1.0));
            roots.push_back({th0 - beta, 1});
            roots.push_back({th0 + beta, 1});
        }
        double lo = std::min(0.0, phi), hi = std::max(0.0, phi);
        std::int64_t count = 0;
        for (auto [base, w] : roots) {
            double m0 = std::floor((lo - tol - base) / (2 * pi));
            for (double m = m0; base + 2 * pi * m <= hi + tol; m += 1.0) {
                double r = base + 2 * pi * m;
                if (r < lo - tol)
                    continue;
                bool at_end = std::abs(r - lo) <= tol || std::abs(r - hi) <= tol;
                count += at_end ? w : 2 * w;
            }
        }
        halves += phi > 0 ? count : -count;
    }
    IndexEstimate est;
    est.value = HalfInteger::from_halves(halves);
    est.method = IndexMethod::kan_winding;
    est.grid_points = path.size();
    return est;
}

namespace detail {

using CMatrix = Eigen::MatrixXcd;

/// Unitary image Z Z^T of the Lagrangian {(C u, psi u)} in R^{4n} with the
/// standard structure, where C = diag(1, -1, ...) is anti-symplectic. This
/// turns (graph psi, diagonal) under (-omega0) + omega0 into a pair of
/// Lagrangians for omega0 + omega0.
inline CMatrix souriau(const Matrix& psi)
{
    const Eigen::Index d = psi.rows();
    Matrix basis(2 * d, d);
    basis.topRows(d).setZero();
    for (Eigen::Index i = 0; i < d; ++i)
        basis(i, i) = i % 2 == 0 ? 1.0 : -1.0;
    basis.bottomRows(d) = psi;
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix q = qr.householderQ() * Matrix::Identity(2 * d, d);
    CMatrix z(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            z(r, c) = {q(2 * r, c), q(2 * r + 1, c)};
    return z * z.transpose();
}

/// Eigenvalue angles in (-pi, pi] of W = U(psi) conj(U(id)).
inline std::vector<double> souriau_angles(const Matrix& psi, const CMatrix& base_conj)
{
    Eigen::ComplexEigenSolver<CMatrix> es(souriau(psi) * base_conj, false);
    std::vector<double> a;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        a.push_back(std::arg(es.eigenvalues()(i)));
    std::sort(a.begin(), a.end());
    return a;
}

inline double angle_gap(double a, double b)
{
    return std::remainder(b - a, 2 * std::numbers::pi);
}

} // namespace detail

/// Robbin-Salamon index as the spectral flow of W(t) through 1.
///
/// Each eigenvalue exp(i theta) is followed along the grid; theta passing 0
/// counts +-1 and theta starting or ending at 0 counts +-1/2. Intervals are
/// halved until every eigenvalue moves less than max_step radians. An end
/// angle within end_tol of 0 is read as a kernel direction. With small
/// moves the count does not depend on how nearly equal eigenvalues are paired,
/// and touches of the cycle contribute nothing whether or not they are
/// resolved.
inline IndexEstimate rs_index_spectral(const SymplecticPath& path, double max_step = 0.25,
                                       double end_tol = 1e-9)
{
    const Eigen::Index d = path.dim();
    const detail::CMatrix base = detail::souriau(Matrix::Identity(d, d)).conjugate();
    const double two_pi = 2 * std::numbers::pi;
    // E(theta) = (floor + ceil)(theta / 2 pi) / 2 with ends snapped to 0.
    auto half_count = [&](double theta) -> std::int64_t {
        double x = theta / two_pi;
        double r = std::round(x);
        if (std::abs(x - r) * two_pi < end_tol)
            return 2 * static_cast<std::int64_t>(r);
        return static_cast<std::int64_t>(std::floor(x)) + static_cast<std::int64_t>(std::ceil(x));
    };
    // Matches b to a (both sorted on the circle) by the cyclic shift with the
    // smallest largest move.
    auto match = [&](const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& moves) {
        const std::size_t n = a.size();
        double best = 1e9;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < n; ++k) {
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(detail::angle_gap(a[i], b[(i + k) % n])));
            if (worst < best) {
                best = worst;
                best_k = k;
            }
        }
        moves.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            moves[i] = detail::angle_gap(a[i], b[(i + best_k) % n]);
        std::vector<double> permuted(n);
        for (std::size_t i = 0; i < n; ++i)
            permuted[i] = b[(i + best_k) % n];
        return std::make_pair(best, permuted);
    };

    const auto& ts = path.times();
    std::vector<double> lift = detail::souriau_angles(path.front(), base);
    std::vector<double> cur = lift;
    std::size_t evals = 1;
    std::vector<double> moves;
    std::vector<std::pair<double, std::vector<double>>> stack;
    double t_cur = ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i) {
        stack.clear();
        stack.push_back({ts[i], detail::souriau_angles(path.samples()[i], base)});
        ++evals;
        while (!stack.empty()) {
            auto& [t_next, ang] = stack.back();
            auto [best, perm] = match(cur, ang, moves);
            bool ok = best < max_step;
            if (!ok && t_next - t_cur > 1e-12 * std::max(1.0, path.horizon())) {
                double mid = 0.5 * (t_cur + t_next);
                stack.push_back({mid, detail::souriau_angles(path.at(mid), base)});
                ++evals;
                if (evals > 2'000'000)
                    throw ResolutionError("spectral flow needs too many refinements");
                continue;
            }
            if (!ok && best > 0.5)
                throw ResolutionError("spectral flow could not resolve an eigenvalue jump");
            for (std::size_t k = 0; k < cur.size(); ++k)
                lift[k] += moves[k];
            cur = perm;
            t_cur = t_next;
            stack.pop_back();
        }
    }
    std::int64_t halves = 0;
    std::vector<double> start = detail::souriau_angles(path.front(), base);
    // start is sorted, and the lift began from the same list.
    for (std::size_t k = 0; k < lift.size(); ++k)
        halves += half_count(lift[k]) - half_count(start[k]);
    IndexEstimate est;
    est.value = HalfInteger::from_halves(halves);
    est.method = IndexMethod::spectral_flow;
    est.grid_points = evals;
    return est;
}

/// k periods of a periodic linearised flow: psi(t + j) = psi_1(t) P^j.
inline SymplecticPath iterate_period(const SymplecticPath& one_period, int k)
{
    if (k < 1)
        throw ValidationError("iteration count must be positive");
    const double T = one_period.horizon();
    const Matrix P = one_period.back();
    std::vector<Matrix> powers{Matrix::Identity(P.rows(), P.cols())};
    for (int j = 1; j <= k; ++j)
        powers.push_back(powers.back() * P);
    auto eval = [one_period, powers, T, k](double t) -> Matrix {
        int j = std::clamp(static_cast<int>(std::floor(t / T)), 0, k - 1);
        return Matrix(one_period.at(t - j * T) * powers[j]);
    };
    std::vector<double> ts;
    std::vector<Matrix> ms;
    std::size_t per = one_period.size() - 1;
    for (int j = 0; j < k; ++j)
        for (std::size_t i = 0; i < per; ++i) {
            ts.push_back(j * T + one_period.times()[i]);
            ms.push_back(one_period.samples()[i] * powers[j]);
        }
    ts.push_back(k * T);
    ms.push_back(powers[k]);
    return SymplecticPath(std::move(ts), std::move(ms), std::move(eval), {.require_identity_start = true, .tol = 1e-9});
}

struct MeanIndexResult
{
    double value = 0.0;
    std::vector<HalfInteger> indices; // mu_RS over [0, k], k = 1..k_max
    std::vector<double> ratios;       // mu_RS / k
};

/// Mean index of a periodic generator (its linearisation over one period,
/// starting at the identity). The O(1) defect of mu_k is eliminated by the
/// two-point difference (mu_K - mu_{K/2}) / (K - K/2).
inline MeanIndexResult mean_index(const SymplecticPath& one_period, int k_max, const RsIndexOptions& opts = {})
{
    if (k_max < 2)
        throw ValidationError("mean index needs k_max >= 2");
    if ((one_period.front() - Matrix::Identity(one_period.dim(), one_period.dim())).cwiseAbs().maxCoeff() > 1e-9)
        throw ValidationError("periodic generator must start at the identity");
    MeanIndexResult r;
    for (int k = 1; k <= k_max; ++k) {
        auto est = rs_index(iterate_period(one_period, k), opts);
        r.indices.push_back(est.value);
        r.ratios.push_back(est.value.value() / k);
    }
    int K = k_max, H = k_max / 2;
    r.value = (r.indices[K - 1].value() - r.indices[H - 1].value()) / (K - H);
    return r;
}

} // namespace sympath

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "errors.hpp"
#include "flow.hpp"
#include "index.hpp"
#include "path.hpp"
#include "reeb.hpp"

namespace sympath {

// ---------------------------------------------------------------------------
// Index growth

enum class GrowthSign { positive, negative, indefinite };

inline const char* to_string(GrowthSign s)
{
    switch (s) {
    case GrowthSign::positive:
        return "positive";
    case GrowthSign::negative:
        return "negative";
    default:
        return "indefinite";
    }
}

struct GrowthSample
{
    double T = 0.0;
    HalfInteger mu;
};

/// Lower bound |mu| >= slope T + intercept, valid at every sample.
struct GrowthFit
{
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<GrowthSample> samples;
    GrowthSign sign = GrowthSign::indefinite;

    double margin(const GrowthSample& s) const { return std::abs(s.mu.value()) - slope * s.T - intercept; }
};

/// Supporting line of the lower convex hull of (T, |mu|), taken along the
/// hull edge with the largest T, which carries the asymptotic slope. A
/// non-positive asymptotic slope gives slope 0 and intercept min |mu|.
inline GrowthFit supporting_line(std::vector<GrowthSample> samples)
{
    if (samples.empty())
        throw ValidationError("growth fit needs at least one sample");
    std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.T < b.T; });
    GrowthFit fit;
    bool pos = true, neg = true;
    for (const auto& s : samples) {
        pos = pos && s.mu.halves() > 0;
        neg = neg && s.mu.halves() < 0;
    }
    fit.sign = pos ? GrowthSign::positive : neg ? GrowthSign::negative : GrowthSign::indefinite;

    std::vector<std::pair<double, double>> hull;
    auto cross = [](auto o, auto a, auto b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    for (const auto& s : samples) {
        std::pair<double, double> p{s.T, std::abs(s.mu.value())};
        if (!hull.empty() && p.first == hull.back().first) {
            if (p.second >= hull.back().second)
                continue;
            hull.pop_back();
        }
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : samples)
        lo = std::min(lo, std::abs(s.mu.value()));
    fit.intercept = lo;
    if (hull.size() >= 2) {
        auto a = hull[hull.size() - 2], b = hull.back();
        double c = (b.second - a.second) / (b.first - a.first);
        if (c > 0.0) {
            fit.slope = c;
            fit.intercept = b.second - c * b.first;
        }
    }
    // Guard against rounding in the hull arithmetic.
    for (const auto& s : samples)
        fit.intercept = std::min(fit.intercept, std::abs(s.mu.value()) - fit.slope * s.T);
    fit.samples = std::move(samples);
    return fit;
}

using ArcGenerator = std::function<SymplecticPath(double)>;

inline GrowthFit fit_index_growth(const ArcGenerator& gen, const std::vector<double>& horizons,
                                  const RsIndexOptions& opts = {})
{
    std::vector<GrowthSample> samples;
    for (double T : horizons) {
        if (!(T > 0.0))
            throw ValidationError("growth horizons must be positive");
        samples.push_back({T, rs_index(gen(T), opts).value});
    }
    return supporting_line(std::move(samples));
}

// ---------------------------------------------------------------------------
// Convexity certificate

using SurfaceSampler = std::function<Vector(std::mt19937_64&)>;

/// Radial pushforward of the uniform measure on the unit sphere onto the
/// component met first by rays from the origin (phi < 0 at the origin).
inline SurfaceSampler sphere_pushforward(const HypersurfaceSpec& s, int dim = 4)
{
    return [s, dim](std::mt19937_64& rng) {
        std::normal_distribution<double> nd;
        Vector u(dim);
        for (int i = 0; i < dim; ++i)
            u(i) = nd(rng);
        u.normalize();
        if (s.phi(Vector::Zero(dim)) >= 0.0)
            throw DomainError("surface does not enclose the origin");
        double lo = 0.0, hi = 1.0 / 64;
        for (int k = 0; s.phi(hi * u) < 0.0; ++k) {
            if (k > 64 * 64)
                throw DomainError("radial ray does not meet the surface");
            lo = hi;
            hi += 1.0 / 64;
        }
        for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
            double mid = 0.5 * (lo + hi);
            (s.phi(mid * u) < 0.0 ? lo : hi) = mid;
        }
        return project_to_surface(s, Vector(0.5 * (lo + hi) * u));
    };
}

/// Orthonormal basis of the tangent space ker(d phi) as columns.
inline Matrix tangent_space(const HypersurfaceSpec& s, const Vector& z)
{
    Vector g = s.grad(z);
    if (g.norm() < kMinGradient)
        throw DegeneracyError("gradient vanishes; the level set is singular here");
    Eigen::JacobiSVD<Matrix> svd(g.transpose(), Eigen::ComputeFullV);
    return svd.matrixV().rightCols(z.size() - 1);
}

struct RestrictedHessian
{
    double min_eigenvalue = 0.0;
    Vector direction; // unit tangent vector realising it
};

inline RestrictedHessian restricted_hessian(const HypersurfaceSpec& s, const Vector& z)
{
    Matrix q = tangent_space(s, z);
    Eigen::SelfAdjointEigenSolver<Matrix> es(q.transpose() * s.hess(z) * q);
    return {es.eigenvalues()(0), q * es.eigenvectors().col(0)};
}

enum class Verdict { certified, refused };

inline const char* to_string(Verdict v) { return v == Verdict::certified ? "certified" : "refused"; }

struct ConvexityWitness
{
    Vector point;
    Vector direction;
    double eigenvalue = 0.0;
};

struct ConvexityCertificate
{
    std::string surface;
    double lambda_min = std::numeric_limits<double>::infinity();
    double max_alpha_xphi = 0.0;
    double min_alpha_xphi = std::numeric_limits<double>::infinity();
    double predicted_slope = 0.0; // lambda_min / (pi max alpha(X_phi)) when certified
    std::size_t n_samples = 0;
    Verdict verdict = Verdict::refused;
    std::optional<ConvexityWitness> witness;
};

/// Sampled certificate: the minimum is over the samples only, so a certified
/// verdict is evidence rather than proof.
inline ConvexityCertificate convexity_certify(const HypersurfaceSpec& s, std::size_t n, std::uint64_t seed = 0,
                                              SurfaceSampler sampler = {})
{
    if (n == 0)
        throw ValidationError("convexity certificate needs at least one sample");
    if (!sampler)
        sampler = sphere_pushforward(s);
    std::mt19937_64 rng(seed);
    ConvexityCertificate c;
    c.surface = s.name;
    c.n_samples = n;
    for (std::size_t i = 0; i < n; ++i) {
        Vector z = sampler(rng);
        auto rh = restricted_hessian(s, z);
        double a = alpha_of_xphi(s, z);
        c.max_alpha_xphi = std::max(c.max_alpha_xphi, a);
        c.min_alpha_xphi = std::min(c.min_alpha_xphi, a);
        if (rh.min_eigenvalue < c.lambda_min) {
            c.lambda_min = rh.min_eigenvalue;
            if (rh.min_eigenvalue <= 0.0)
                c.witness = ConvexityWitness{z, rh.direction, rh.min_eigenvalue};
        }
    }
    bool star = c.min_alpha_xphi > 0.0;
    c.verdict = c.lambda_min > 0.0 && star ? Verdict::certified : Verdict::refused;
    if (c.verdict == Verdict::certified)
        c.predicted_slope = c.lambda_min / (std::numbers::pi * c.max_alpha_xphi);
    return c;
}

// ---------------------------------------------------------------------------
// Index bound along Reeb arcs

/// Reeb arcs from sampled starting points with lengths uniform in [0, t_max].
/// The Liouville action is recorded, so total_action() is the Reeb action.
inline std::vector<FlowArc> random_reeb_arcs(const HypersurfaceSpec& s, std::size_t count, double t_max,
                                             std::uint64_t seed, IntegrateOptions o = {})
{
    auto sampler = sphere_pushforward(s);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, t_max);
    o.action_density = [](const Vector& x, const Vector& v) { return liouville(x, v); };
    std::vector<FlowArc> arcs;
    for (std::size_t i = 0; i < count; ++i) {
        Vector z = sampler(rng);
        arcs.push_back(reeb_arc(s, z, ut(rng), o));
    }
    return arcs;
}

struct ArcMargin
{
    double T_R = 0.0; // Reeb action int alpha along the arc
    HalfInteger mu;
    double bound = 0.0;
    double margin = 0.0;
};

struct IndexBoundReport
{
    double predicted_slope = 0.0;
    std::vector<ArcMargin> arcs;
    double min_margin = std::numeric_limits<double>::infinity();

    bool holds() const { return min_margin >= 0.0; }
};

/// mu_RS of the reduced path >= predicted_slope T_R - 4 on each arc.
inline IndexBoundReport index_bound_check(const HypersurfaceSpec& s, const ConvexityCertificate& cert,
                                          const std::vector<FlowArc>& arcs, const RsIndexOptions& opts = {})
{
    if (cert.verdict != Verdict::certified)
        throw ValidationError("index bound requires a certified convex surface");
    IndexBoundReport r;
    r.predicted_slope = cert.predicted_slope;
    for (const auto& arc : arcs) {
        ArcMargin m;
        m.T_R = arc.action.empty() ? arc.horizon() : arc.total_action();
        // A zero-length path has no interior and the bound is vacuous.
        if (arc.times.size() > 1 && arc.horizon() > 0.0)
            m.mu = rs_index(reduce_to_frame(s, arc), opts).value;
        m.bound = cert.predicted_slope * m.T_R - 4.0;
        m.margin = m.mu.value() - m.bound;
        r.min_margin = std::min(r.min_margin, m.margin);
        r.arcs.push_back(m);
    }
    return r;
}

struct CrossingPositivityReport
{
    std::size_t count = 0;
    bool all_positive = true;
    double min_rate = std::numeric_limits<double>::infinity();
    double required_rate = 0.0;

    bool rate_ok(double tol = 1e-6) const { return count == 0 || min_rate >= required_rate - tol; }
};

/// Every crossing of a reduced path should be regular with positive-definite
/// crossing form, turning at least at required_rate = lambda_min / max alpha
/// in Reeb time.
inline CrossingPositivityReport crossing_positivity_check(const SymplecticPath& reduced, double required_rate,
                                                          int subdivisions = 4)
{
    auto cs = crossings(reduced, subdivisions);
    CrossingPositivityReport r;
    r.required_rate = required_rate;
    for (const auto& c : cs.crossings) {
        if (!c.regular)
            throw ResolutionError("degenerate crossing near t=" + std::to_string(c.time) + "; refine the path grid");
        ++r.count;
        r.all_positive = r.all_positive && c.signature == c.kernel_dim;
        r.min_rate = std::min(r.min_rate, c.min_rate);
    }
    return r;
}


// ---------------------------------------------------------------------------
// Structured paths
//
// Coordinates split as (z', x_n, y_n) with z' in R^{2n-2}. The generator has
// R in sp(2n-2) on z', the column xi = (X_1, Y_1, ...) feeding x_n into z',
// the row eta = (Y_1, -X_1, ...) feeding z' into y_n, and [[a, 0], [b, -a]]
// on (x_n, y_n). Solutions lie in the group of matrices
// [[M, xbar, 0], [0, alpha, 0], [w, beta, 1/alpha]].

struct StructuredBlocks
{
    int n = 2;
    std::function<Matrix(double)> R;
    std::function<Vector(double)> X, Y;
    std::function<double(double)> a, b;
};

inline Matrix assemble(const StructuredBlocks& bl, double t)
{
    const int m = 2 * bl.n - 2, p = m, q = m + 1;
    Matrix A = Matrix::Zero(m + 2, m + 2);
    A.topLeftCorner(m, m) = bl.R(t);
    Vector X = bl.X(t), Y = bl.Y(t);
    for (int i = 0; i < bl.n - 1; ++i) {
        A(2 * i, p) = X(i);
        A(2 * i + 1, p) = Y(i);
        A(q, 2 * i) = Y(i);
        A(q, 2 * i + 1) = -X(i);
    }
    A(p, p) = bl.a(t);
    A(q, p) = bl.b(t);
    A(q, q) = -bl.a(t);
    return A;
}

/// Distance of A from the structured subalgebra: entries that must vanish,
/// the coupling between column and row, and the sp condition.
inline double algebra_residual(const Matrix& A)
{
    const int d = static_cast<int>(A.rows()), m = d - 2, p = m, q = m + 1;
    double r = 0.0;
    for (int i = 0; i < m; ++i) {
        r = std::max(r, std::abs(A(i, q)));
        r = std::max(r, std::abs(A(p, i)));
    }
    r = std::max(r, std::abs(A(p, q)));
    r = std::max(r, std::abs(A(p, p) + A(q, q)));
    for (int i = 0; i + 1 < m; i += 2) {
        r = std::max(r, std::abs(A(q, i) - A(i + 1, p)));
        r = std::max(r, std::abs(A(q, i + 1) + A(i, p)));
    }
    return std::max(r, lie_algebra_residual(A));
}

struct GroupParts
{
    Matrix M;
    Vector xbar; // column x_n above the last pair
    Vector w;    // row y_n left of the last pair, (u_1, v_1, ...)
    double alpha = 1.0;
    double beta = 0.0;
};

inline GroupParts group_parts(const Matrix& psi)
{
    const int d = static_cast<int>(psi.rows()), m = d - 2, p = m, q = m + 1;
    GroupParts g;
    g.M = psi.topLeftCorner(m, m);
    g.xbar = psi.col(p).head(m);
    g.w = psi.row(q).head(m).transpose();
    g.alpha = psi(p, p);
    g.beta = psi(q, p);
    return g;
}

/// Zero pattern, lower-right block [[alpha, 0], [beta, 1/alpha]] and
/// symplecticity, each scaled by the size of psi.
inline double group_pattern_residual(const Matrix& psi)
{
    const int d = static_cast<int>(psi.rows()), m = d - 2, p = m, q = m + 1;
    double r = 0.0;
    for (int i = 0; i < m; ++i) {
        r = std::max(r, std::abs(psi(i, q)));
        r = std::max(r, std::abs(psi(p, i)));
    }
    r = std::max(r, std::abs(psi(p, q)));
    r = std::max(r, std::abs(psi(p, p) * psi(q, q) - 1.0));
    return std::max(r / std::max(1.0, psi.norm()), symplectic_residual(psi) / std::max(1.0, psi.squaredNorm()));
}

/// |(-ybar, xbar) M + alpha (u, v)| with (-ybar, xbar) interleaved per pair.
inline double group_constraint_residual(const Matrix& psi)
{
    GroupParts g = group_parts(psi);
    Vector rot(g.xbar.size());
    for (int i = 0; i + 1 < g.xbar.size(); i += 2) {
        rot(i) = -g.xbar(i + 1);
        rot(i + 1) = g.xbar(i);
    }
    Vector r = g.M.transpose() * rot + g.alpha * g.w;
    return r.norm() / std::max(1.0, psi.squaredNorm());
}

struct StructuredPath
{
    StructuredBlocks blocks;
    double T = 0.0;
    SymplecticPath psi; // dimension 2n
    SymplecticPath M;   // dimension 2n - 2, integrated on its own

    Matrix A(double t) const { return assemble(blocks, t); }

    /// Restriction to [0, t]; the sampling was already validated by step size.
    StructuredPath truncated(double t) const
    {
        constexpr double kAny = std::numeric_limits<double>::max();
        return StructuredPath{blocks, t, psi.truncated(t, kAny), M.truncated(t, kAny)};
    }
};

inline VectorFieldSpec time_dependent_linear_field(std::function<Matrix(double)> A, int dim)
{
    VectorFieldSpec f;
    f.dim = dim;
    f.autonomous = false;
    f.eval = [A](const Vector& x, double t) { return Vector(A(t) * x); };
    f.jacobian = [A](const Vector&, double t) { return A(t); };
    return f;
}

/// Variational matrices of the linear field A(t) sampled every output_dt.
/// Structured solutions can grow large, so sampling is judged by the step
/// psi_{i+1} psi_i^{-1} - id, close to exp(A dt) - id, instead of the
/// absolute gap.
inline SymplecticPath linear_solution(const std::function<Matrix(double)>& A, int dim, double T, IntegrateOptions o)
{
    auto f = time_dependent_linear_field(A, dim);
    o.variational = true;
    for (int attempt = 0; attempt < 8; ++attempt) {
        FlowArc arc = integrate(f, Vector::Zero(dim), T, o);
        double step = 0.0;
        for (std::size_t i = 1; i < arc.variational.size(); ++i) {
            Matrix rel = arc.variational[i] * symplectic_inverse(arc.variational[i - 1]);
            step = std::max(step, (rel - Matrix::Identity(dim, dim)).norm());
        }
        if (step <= 0.4) {
            double big = 1.0;
            for (const auto& m : arc.variational)
                big = std::max(big, m.norm());
            try {
                return SymplecticPath(arc.times, arc.variational, {},
                                      PathOptions{.require_identity_start = true, .tol = 1e-9, .gap_max = 0.5 * big});
            } catch (const ValidationError&) {
                o.rtol *= 0.01;
                o.atol *= 0.01;
                continue;
            }
        }
        o.output_dt *= std::max(0.1, 0.3 / step);
    }
    throw StiffnessError("structured solution could not be sampled finely enough");
}

inline StructuredPath integrate_structured(StructuredBlocks blocks, double T, IntegrateOptions o = {})
{
    if (blocks.n < 2)
        throw ValidationError("structured paths need n >= 2");
    if (!(T > 0.0))
        throw ValidationError("horizon must be positive");
    if (assemble(blocks, 0.0).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("structured generator must vanish at t = 0");
    const int d = 2 * blocks.n;
    if (o.output_dt <= 0.0)
        o.output_dt = std::min(0.05, T / 64.0);
    // Tight enough that the sub-path passes the default symplectic tolerance.
    o.rtol = std::min(o.rtol, 1e-12);
    o.atol = std::min(o.atol, 1e-14);
    try {
        SymplecticPath psi = linear_solution([blocks](double t) { return assemble(blocks, t); }, d, T, o);
        SymplecticPath M = linear_solution(blocks.R, d - 2, T, o);
        return StructuredPath{std::move(blocks), T, std::move(psi), std::move(M)};
    } catch (const TimeoutError& e) {
        throw StiffnessError(std::string("structured integration failed: ") + e.what());
    }
}

inline StructuredBlocks structured_zero(int n)
{
    StructuredBlocks b;
    b.n = n;
    const int m = 2 * n - 2;
    b.R = [m](double) { return Matrix(Matrix::Zero(m, m)); };
    b.X = b.Y = [n](double) { return Vector(Vector::Zero(n - 1)); };
    b.a = b.b = [](double) { return 0.0; };
    return b;
}

/// Band-limited random blocks: every entry is a sum of `smoothness` sine modes
/// with frequencies in [0.3, 2], so A(0) = 0. R is I S with S the drift
/// (1 - exp(-t)) P, P symmetric positive definite, plus a weaker oscillating
/// part, so M rotates on average and stays of moderate size.
inline StructuredBlocks structured_random_blocks(int n, std::uint64_t seed, int smoothness = 3)
{
    if (n < 2)
        throw ValidationError("structured paths need n >= 2");
    if (smoothness < 1)
        throw ValidationError("smoothness must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> uf(0.3, 2.0), ue(0.5, 1.5);
    const int m = 2 * n - 2, k = smoothness;
    const double amp = 0.5 / std::sqrt(static_cast<double>(k));
    auto modes = [&](int rows, int cols, double scale = 1.0) {
        std::vector<std::pair<double, Matrix>> ms;
        for (int j = 0; j < k; ++j) {
            Matrix c(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int s = 0; s < cols; ++s)
                    c(r, s) = scale * amp * nd(rng);
            ms.emplace_back(uf(rng), c);
        }
        return ms;
    };
    auto eval = [](const std::vector<std::pair<double, Matrix>>& ms, double t) {
        Matrix out = Matrix::Zero(ms[0].second.rows(), ms[0].second.cols());
        for (const auto& [f, c] : ms)
            out += std::sin(f * t) * c;
        return out;
    };
    auto smodes = modes(m, m, 0.4);
    for (auto& [f, c] : smodes)
        c = (0.5 * (c + c.transpose())).eval();
    Matrix q(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            q(r, c) = nd(rng);
    Eigen::HouseholderQR<Matrix> qr(q);
    Matrix basis = qr.householderQ();
    Vector ev(m);
    for (int i = 0; i < m; ++i)
        ev(i) = ue(rng);
    Matrix P = basis * ev.asDiagonal() * basis.transpose();
    Matrix I = complex_structure(m);
    auto xm = modes(n - 1, 1), ym = modes(n - 1, 1), am = modes(1, 1), bm = modes(1, 1);

    StructuredBlocks b;
    b.n = n;
    b.R = [=](double t) { return Matrix(I * (eval(smodes, t) + (1.0 - std::exp(-t)) * P)); };
    b.X = [=](double t) { return Vector(eval(xm, t).col(0)); };
    b.Y = [=](double t) { return Vector(eval(ym, t).col(0)); };
    b.a = [=](double t) { return eval(am, t)(0, 0); };
    b.b = [=](double t) { return eval(bm, t)(0, 0); };
    return b;
}

inline StructuredPath structured_random(int n, double T, std::uint64_t seed, int smoothness = 3,
                                        IntegrateOptions o = {})
{
    return integrate_structured(structured_random_blocks(n, seed, smoothness), T, o);
}

struct StructuredInvariants
{
    double algebra = 0.0;    // max over samples of algebra_residual(A(t))
    double pattern = 0.0;    // max group_pattern_residual(psi(t))
    double constraint = 0.0; // max group_constraint_residual(psi(t))
    double sub_block = 0.0;  // max |psi top-left - M| / max(1, |M|)
};

inline StructuredInvariants structured_invariants(const StructuredPath& sp)
{
    StructuredInvariants r;
    const auto& ts = sp.psi.times();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const Matrix& psi = sp.psi.samples()[i];
        Matrix M = sp.M.at(ts[i]);
        r.algebra = std::max(r.algebra, algebra_residual(sp.A(ts[i])));
        r.pattern = std::max(r.pattern, group_pattern_residual(psi));
        r.constraint = std::max(r.constraint, group_constraint_residual(psi));
        double m = (group_parts(psi).M - M).norm() / std::max(1.0, M.norm());
        r.sub_block = std::max(r.sub_block, m);
    }
    return r;
}

/// psi with the off-diagonal group entries xbar, w and beta scaled by s.
inline Matrix scale_off_diagonal(const Matrix& psi, double s)
{
    const int d = static_cast<int>(psi.rows()), m = d - 2, p = m, q = m + 1;
    Matrix out = psi;
    out.col(p).head(m) *= s;
    out.row(q).head(m) *= s;
    out(q, p) *= s;
    return out;
}

struct DeterminantReport
{
    double homotopy = 0.0;          // max |det(psi_s - id) - det(psi_0 - id)|
    double homotopy_relative = 0.0; // same, divided by max(1, |det(psi_0 - id)|)
    double factored = 0.0;          // max |det(psi - id) - det(M - id)(alpha - 1)(1/alpha - 1)|
    double factored_relative = 0.0;
    std::size_t evaluations = 0;
};

inline DeterminantReport determinant_identity_check(const StructuredPath& sp, const std::vector<double>& s_grid)
{
    DeterminantReport r;
    for (const Matrix& psi : sp.psi.samples()) {
        const int d = static_cast<int>(psi.rows());
        Matrix id = Matrix::Identity(d, d);
        double d0 = (scale_off_diagonal(psi, 0.0) - id).determinant();
        if (!std::isfinite(d0))
            throw PrecisionError("determinant overflow along the structured path");
        double scale = std::max(1.0, std::abs(d0));
        for (double s : s_grid) {
            double e = std::abs((scale_off_diagonal(psi, s) - id).determinant() - d0);
            r.homotopy = std::max(r.homotopy, e);
            r.homotopy_relative = std::max(r.homotopy_relative, e / scale);
            ++r.evaluations;
        }
        GroupParts g = group_parts(psi);
        double f = (g.M - Matrix::Identity(d - 2, d - 2)).determinant() * (g.alpha - 1.0) * (1.0 / g.alpha - 1.0);
        double e = std::abs((psi - id).determinant() - f);
        r.factored = std::max(r.factored, e);
        r.factored_relative = std::max(r.factored_relative, e / scale);
    }
    return r;
}

struct IndexComparison
{
    HalfInteger mu_full;
    HalfInteger mu_sub;
    HalfInteger diff;
};

/// Indices of psi and M. The default route is spectral flow: at alpha = 1 the
/// lower block touches the cycle tangentially, which crossing-form searches
/// resolve only at great cost.
inline IndexComparison structured_index_comparison(const SymplecticPath& psi, const SymplecticPath& M,
                                                   IndexMethod method = IndexMethod::spectral_flow)
{
    auto mu = [method](const SymplecticPath& p) {
        switch (method) {
        case IndexMethod::crossing_form:
            return rs_index(p).value;
        case IndexMethod::kan_winding:
            return p.dim() == 2 ? rs_index_kan(p).value : rs_index_spectral(p).value;
        default:
            return rs_index_spectral(p).value;
        }
    };
    IndexComparison c;
    c.mu_full = mu(psi);
    c.mu_sub = mu(M);
    c.diff = c.mu_full - c.mu_sub;
    return c;
}

inline IndexComparison structured_index_comparison(const StructuredPath& sp,
                                                   IndexMethod method = IndexMethod::spectral_flow)
{
    return structured_index_comparison(sp.psi, sp.M, method);
}

/// The (x_n, y_n) block [[alpha, 0], [beta, 1/alpha]] as a path in Sp(2).
inline SymplecticPath lower_block(const SymplecticPath& psi)
{
    std::vector<Matrix> ms;
    for (const auto& m : psi.samples())
        ms.push_back(m.bottomRightCorner(2, 2));
    return SymplecticPath(psi.times(), ms, {}, PathOptions{.tol = 1e-9, .gap_max = 1e9});
}

} // namespace sympath

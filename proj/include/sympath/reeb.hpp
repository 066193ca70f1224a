#pragma once

// Star-shaped hypersurfaces in R^4 with the contact form induced by
// lambda = 1/2 sum (x dy - y dx), their Reeb fields, the quaternionic
// contact frame and the reduction of linearised Reeb flows to it.

#include <cmath>
#include <numbers>
#include <string>

#include "flow.hpp"

namespace sympath {

/// Normalisation of the Liouville form, echoed in every report.
inline constexpr const char* kLiouvilleConvention = "lambda = 1/2 sum_j (x_j dy_j - y_j dx_j), d lambda = omega0";

/// lambda_z(v) = 1/2 omega0(z, v).
inline double liouville(const Vector& z, const Vector& v) { return 0.5 * omega0(z, v); }

namespace surfaces {

/// phi = |z1|^2 / r1^2 + |z2|^2 / r2^2 - 1.
inline HypersurfaceSpec ellipsoid(double r1, double r2)
{
    if (!(r1 > 0.0 && r2 > 0.0))
        throw ValidationError("ellipsoid radii must be positive");
    Vector w(4);
    w << 1 / (r1 * r1), 1 / (r1 * r1), 1 / (r2 * r2), 1 / (r2 * r2);
    HypersurfaceSpec s;
    s.name = "ellipsoid:" + std::to_string(r1) + "," + std::to_string(r2);
    s.phi = [w](const Vector& z) { return z.cwiseProduct(z).dot(w) - 1.0; };
    s.grad = [w](const Vector& z) { return Vector(2.0 * z.cwiseProduct(w)); };
    s.hess = [w](const Vector&) { return Matrix(Matrix(2.0 * w.asDiagonal())); };
    return s;
}

inline HypersurfaceSpec round_sphere()
{
    auto s = ellipsoid(1.0, 1.0);
    s.name = "sphere";
    return s;
}

/// phi = |z|^2 - 1 + c Re(z1^4). The level set has an unbounded component for
/// every c != 0; the component met first by rays from the origin is compact
/// and star-shaped for |c| < 1/4. Its restricted Hessian turns negative
/// between |c| = 0.15 and 0.2 (the z1-plane curve bends inward).
inline HypersurfaceSpec perturbed(double c)
{
    HypersurfaceSpec s;
    s.name = "perturbed:" + std::to_string(c);
    s.phi = [c](const Vector& z) {
        double x = z(0), y = z(1);
        double re4 = x * x * x * x - 6 * x * x * y * y + y * y * y * y;
        return z.squaredNorm() - 1.0 + c * re4;
    };
    s.grad = [c](const Vector& z) {
        double x = z(0), y = z(1);
        Vector g = 2.0 * z;
        g(0) += c * (4 * x * x * x - 12 * x * y * y);
        g(1) += c * (4 * y * y * y - 12 * x * x * y);
        return g;
    };
    s.hess = [c](const Vector& z) {
        double x = z(0), y = z(1);
        Matrix h = 2.0 * Matrix::Identity(4, 4);
        h(0, 0) += c * (12 * x * x - 12 * y * y);
        h(1, 1) += c * (12 * y * y - 12 * x * x);
        h(0, 1) += c * (-24 * x * y);
        h(1, 0) += c * (-24 * x * y);
        return h;
    };
    return s;
}

} // namespace surfaces

/// alpha(X_phi) = lambda(I grad phi) = 1/2 <z, grad phi>.
inline double alpha_of_xphi(const HypersurfaceSpec& s, const Vector& z) { return 0.5 * z.dot(s.grad(z)); }

inline void require_regular(const HypersurfaceSpec& s, const Vector& z)
{
    if (z.size() != 4)
        throw ValidationError("hypersurfaces live in R^4");
    if (s.grad(z).norm() <= kMinGradient)
        throw DegeneracyError("hypersurface is singular at the queried point");
}

/// R = I grad phi / alpha(I grad phi); tangent to every level set of phi.
inline VectorFieldSpec reeb_field(const HypersurfaceSpec& s)
{
    Matrix cs = complex_structure(4);
    VectorFieldSpec f;
    f.dim = 4;
    f.eval = [s, cs](const Vector& z, double) {
        Vector g = s.grad(z);
        double a = 0.5 * z.dot(g);
        if (std::abs(a) < 1e-8)
            throw DegeneracyError("alpha(X_phi) vanishes: surface is not star-shaped here");
        return Vector(cs * g / a);
    };
    f.jacobian = [s, cs](const Vector& z, double) {
        Vector g = s.grad(z);
        Matrix h = s.hess(z);
        double a = 0.5 * z.dot(g);
        if (std::abs(a) < 1e-8)
            throw DegeneracyError("alpha(X_phi) vanishes: surface is not star-shaped here");
        Vector da = 0.5 * (g + h * z);
        return Matrix(cs * h / a - (cs * g) * da.transpose() / (a * a));
    };
    return f;
}

/// Quaternion units on R^4 with I J = K; all anticommute.
inline Matrix quaternion_j()
{
    Matrix j = Matrix::Zero(4, 4);
    j(0, 2) = -1;
    j(1, 3) = 1;
    j(2, 0) = 1;
    j(3, 1) = -1;
    return j;
}

inline Matrix quaternion_k() { return complex_structure(4) * quaternion_j(); }

struct ContactFrame
{
    Vector point;
    Vector reeb;
    Vector u;
    Vector v;
    double alpha_xphi;
    double dalpha_uv;
};

/// U = Jw - alpha(Jw) R, V = Kw - alpha(Kw) R with w the unit normal.
inline ContactFrame contact_frame(const HypersurfaceSpec& s, const Vector& z)
{
    require_regular(s, z);
    Vector g = s.grad(z);
    Vector w = g / g.norm();
    ContactFrame fr;
    fr.point = z;
    fr.alpha_xphi = alpha_of_xphi(s, z);
    if (std::abs(fr.alpha_xphi) < 1e-8)
        throw DegeneracyError("contact frame degenerates: alpha(X_phi) vanishes");
    fr.reeb = complex_structure(4) * g / fr.alpha_xphi;
    Vector jw = quaternion_j() * w, kw = quaternion_k() * w;
    fr.u = jw - liouville(z, jw) * fr.reeb;
    fr.v = kw - liouville(z, kw) * fr.reeb;
    fr.dalpha_uv = omega0(fr.u, fr.v);
    return fr;
}

/// Reeb arc with variational matrices, projected onto the surface.
inline FlowArc reeb_arc(const HypersurfaceSpec& s, const Vector& z0, double T, IntegrateOptions o = {})
{
    require_regular(s, z0);
    o.surface = s;
    o.variational = true;
    if (o.output_dt <= 0.0)
        o.output_dt = 0.02;
    return integrate(reeb_field(s), z0, T, o);
}

/// The linearised flow on xi written in the moving (U, V) frame:
/// psi = [[dalpha(W1, V), dalpha(W2, V)], [dalpha(U, W1), dalpha(U, W2)]]
/// with W1, W2 the images of U(x0), V(x0).
inline SymplecticPath reduce_to_frame(const HypersurfaceSpec& s, const FlowArc& arc, double tol = 1e-8)
{
    if (arc.variational.size() != arc.states.size())
        throw ValidationError("arc carries no variational matrices");
    ContactFrame f0 = contact_frame(s, arc.states.front());
    std::vector<Matrix> ms;
    ms.reserve(arc.states.size());
    for (std::size_t i = 0; i < arc.states.size(); ++i) {
        ContactFrame fi = contact_frame(s, arc.states[i]);
        Vector w1 = arc.variational[i] * f0.u, w2 = arc.variational[i] * f0.v;
        Matrix m(2, 2);
        m << omega0(w1, fi.v), omega0(w2, fi.v), omega0(fi.u, w1), omega0(fi.u, w2);
        ms.push_back(m);
    }
    if (arc.times.size() == 1)
        return SymplecticPath({0.0, 1e-12}, {ms[0], ms[0]}, {}, PathOptions{.tol = tol});
    return SymplecticPath(arc.times, ms, {}, PathOptions{.tol = tol});
}

} // namespace sympath

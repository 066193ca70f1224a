#pragma once

// Adaptive integration of vector fields with dense output, optional
// variational equation, hypersurface projection and event location.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "path.hpp"

namespace sympath {

using FieldFn = std::function<Vector(const Vector&, double)>;
using JacobianFn = std::function<Matrix(const Vector&, double)>;

inline constexpr double kFdStep = 1e-6;

struct VectorFieldSpec
{
    int dim = 0;
    FieldFn eval;
    JacobianFn jacobian; // empty: central differences with kFdStep
    bool autonomous = true;

    bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

inline Matrix fd_jacobian(const VectorFieldSpec& f, const Vector& x, double t, double h = kFdStep)
{
    Matrix j(f.dim, f.dim);
    Vector xp = x, xm = x;
    for (int c = 0; c < f.dim; ++c) {
        xp(c) = x(c) + h;
        xm(c) = x(c) - h;
        j.col(c) = (f.eval(xp, t) - f.eval(xm, t)) / (2.0 * h);
        xp(c) = xm(c) = x(c);
    }
    return j;
}

inline Matrix jacobian_at(const VectorFieldSpec& f, const Vector& x, double t)
{
    return f.has_jacobian() ? f.jacobian(x, t) : fd_jacobian(f, x, t);
}

/// Real function on R^d with gradient and optional Hessian.
struct ScalarField
{
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> grad;
    std::function<Matrix(const Vector&)> hess;
};

/// Gradient by central differences, for fields given only by value.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = kFdStep)
{
    Vector g(x.size());
    Vector xp = x, xm = x;
    for (int c = 0; c < x.size(); ++c) {
        xp(c) = x(c) + h;
        xm(c) = x(c) - h;
        g(c) = (f(xp) - f(xm)) / (2.0 * h);
        xp(c) = xm(c) = x(c);
    }
    return g;
}

/// X_H on standard R^{2n}: omega0(X_H, v) = -dH(v), so X_H = I grad H.
inline VectorFieldSpec hamiltonian_field(const ScalarField& h, int dim)
{
    Matrix cs = complex_structure(dim);
    VectorFieldSpec f;
    f.dim = dim;
    auto grad = h.grad ? h.grad : [v = h.value](const Vector& x) { return fd_gradient(v, x); };
    f.eval = [cs, grad](const Vector& x, double) { return Vector(cs * grad(x)); };
    if (h.hess)
        f.jacobian = [cs, hs = h.hess](const Vector& x, double) { return Matrix(cs * hs(x)); };
    return f;
}

/// Linear field x' = A x.
inline VectorFieldSpec linear_field(const Matrix& a)
{
    VectorFieldSpec f;
    f.dim = static_cast<int>(a.rows());
    f.eval = [a](const Vector& x, double) { return Vector(a * x); };
    f.jacobian = [a](const Vector&, double) { return a; };
    return f;
}

/// Implicit hypersurface phi^{-1}(0).
struct HypersurfaceSpec
{
    std::string name;
    std::function<double(const Vector&)> phi;
    std::function<Vector(const Vector&)> grad;
    std::function<Matrix(const Vector&)> hess;
};

inline constexpr double kTolSurf = 1e-9;
inline constexpr double kMinGradient = 1e-8;

/// Newton retraction onto phi = 0 along the gradient.
inline Vector project_to_surface(const HypersurfaceSpec& s, Vector x, double tol = kTolSurf)
{
    for (int it = 0; it < 20; ++it) {
        double v = s.phi(x);
        if (std::abs(v) < 0.01 * tol)
            return x;
        Vector g = s.grad(x);
        double gg = g.squaredNorm();
        if (gg < kMinGradient * kMinGradient)
            throw DegeneracyError("gradient vanishes during projection");
        x -= (v / gg) * g;
    }
    if (std::abs(s.phi(x)) >= tol)
        throw DegeneracyError("projection onto the hypersurface did not converge");
    return x;
}

struct IntegrateOptions
{
    double rtol = 1e-10;
    double atol = 1e-12;
    bool variational = false;
    std::optional<HypersurfaceSpec> surface; // per-step projection when set
    double tol_surf = kTolSurf;
    double output_dt = 0.0;                   // 0: record accepted step ends
    std::function<double(const Vector&, const Vector&)> action_density; // (x, x') -> integrand
    std::size_t max_steps = 5'000'000;
};

struct FlowArc
{
    Vector x0;
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Matrix> variational;  // D(flow) at each time when requested
    std::vector<double> phi_residual; // |phi| when a surface is set
    std::vector<double> action;       // running integral when requested
    bool fd_jacobian = false;
    std::size_t steps = 0;

    double horizon() const { return times.back(); }
    const Vector& end() const { return states.back(); }
    double total_action() const { return action.empty() ? 0.0 : action.back(); }
};

namespace detail {

using State = std::vector<double>;

struct Layout
{
    int dim;
    bool var;
    bool act;
    std::size_t size() const { return dim + (var ? dim * dim : 0) + (act ? 1 : 0); }
};

inline State pack(const Layout& l, const Vector& x, const Matrix& m, double a)
{
    State s(l.size());
    for (int i = 0; i < l.dim; ++i)
        s[i] = x(i);
    std::size_t k = l.dim;
    if (l.var)
        for (int c = 0; c < l.dim; ++c)
            for (int r = 0; r < l.dim; ++r)
                s[k++] = m(r, c);
    if (l.act)
        s[k] = a;
    return s;
}

inline Vector unpack_x(const Layout& l, const State& s)
{
    return Eigen::Map<const Vector>(s.data(), l.dim);
}

inline Matrix unpack_m(const Layout& l, const State& s)
{
    return Eigen::Map<const Matrix>(s.data() + l.dim, l.dim, l.dim);
}

inline double unpack_a(const Layout& l, const State& s) { return s.back(); }

/// Dense evaluation inside the current step; the reference stays valid
/// until the next call.
using DenseFn = std::function<const State&(double)>;

/// Steps the field from x0 until on_step returns true or t reaches t_end.
/// on_step(t0, t1, dense) sees each accepted (pre-projection) step.
template <class OnStep>
void drive(const VectorFieldSpec& f, const Vector& x0, double t_end, const IntegrateOptions& o, const Layout& l,
           OnStep&& on_step, std::size_t& steps)
{
    namespace ode = boost::numeric::odeint;
    const bool var = l.var, act = l.act;
    Vector x(l.dim);
    auto sys = [&](const State& s, State& ds, double t) {
        x = Eigen::Map<const Vector>(s.data(), l.dim);
        Vector v = f.eval(x, t);
        for (int i = 0; i < l.dim; ++i)
            ds[i] = v(i);
        std::size_t k = l.dim;
        if (var) {
            Matrix a = jacobian_at(f, x, t);
            Matrix dm = a * unpack_m(l, s);
            for (int c = 0; c < l.dim; ++c)
                for (int r = 0; r < l.dim; ++r)
                    ds[k++] = dm(r, c);
        }
        if (act)
            ds[k] = o.action_density(x, v);
    };
    auto stepper = ode::make_dense_output(o.atol, o.rtol, ode::runge_kutta_dopri5<State>());
    Vector xs = o.surface ? project_to_surface(*o.surface, x0, o.tol_surf) : x0;
    State s = pack(l, xs, Matrix::Identity(l.dim, l.dim), 0.0);
    double dt0 = std::min(1e-3, std::max(t_end, 1e-12));
    stepper.initialize(s, 0.0, dt0);
    const double min_dt = 1e-14 * std::max(1.0, t_end);
    State dense_buf(l.size());
    while (stepper.current_time() < t_end) {
        if (++steps > o.max_steps)
            throw StiffnessError("integrator exceeded " + std::to_string(o.max_steps) + " steps at t=" +
                                 std::to_string(stepper.current_time()));
        std::pair<double, double> span;
        try {
            span = stepper.do_step(sys);
        } catch (const ode::step_adjustment_error& e) {
            throw StiffnessError(std::string("step size underflow near t=") +
                                 std::to_string(stepper.current_time()) + ": " + e.what());
        }
        if (span.second - span.first < min_dt && span.second < t_end)
            throw StiffnessError("step size underflow near t=" + std::to_string(span.first));
        for (double v : stepper.current_state())
            if (!std::isfinite(v))
                throw StiffnessError("non-finite state near t=" + std::to_string(span.second));
        DenseFn dense = [&stepper, &dense_buf](double t) -> const State& {
            stepper.calc_state(t, dense_buf);
            return dense_buf;
        };
        if (on_step(span.first, span.second, dense))
            return;
        if (o.surface) {
            State cur = stepper.current_state();
            Vector x = project_to_surface(*o.surface, unpack_x(l, cur), o.tol_surf);
            for (int i = 0; i < l.dim; ++i)
                cur[i] = x(i);
            stepper.initialize(cur, span.second, stepper.current_time_step());
        }
    }
}

inline Vector projected_state(const IntegrateOptions& o, const Layout& l, const State& s)
{
    Vector x = unpack_x(l, s);
    return o.surface ? project_to_surface(*o.surface, x, o.tol_surf) : x;
}

} // namespace detail

/// Integrates x' = f(x, t) on [0, T] with adaptive Dormand-Prince steps.
inline FlowArc integrate(const VectorFieldSpec& f, const Vector& x0, double T, const IntegrateOptions& o = {})
{
    if (!(T >= 0.0) || !std::isfinite(T))
        throw ValidationError("integration horizon must be finite and non-negative");
    if (x0.size() != f.dim)
        throw ValidationError("initial state has the wrong dimension");
    detail::Layout l{f.dim, o.variational, static_cast<bool>(o.action_density)};
    FlowArc arc;
    arc.x0 = x0;
    arc.fd_jacobian = o.variational && !f.has_jacobian();
    auto record = [&](double t, const detail::State& s) {
        arc.times.push_back(t);
        Vector x = detail::projected_state(o, l, s);
        arc.states.push_back(x);
        if (l.var)
            arc.variational.push_back(detail::unpack_m(l, s));
        if (l.act)
            arc.action.push_back(detail::unpack_a(l, s));
        if (o.surface)
            arc.phi_residual.push_back(std::abs(o.surface->phi(x)));
    };
    Vector xs = o.surface ? project_to_surface(*o.surface, x0, o.tol_surf) : x0;
    record(0.0, detail::pack(l, xs, Matrix::Identity(f.dim, f.dim), 0.0));
    if (T == 0.0)
        return arc;
    double next_out = o.output_dt > 0.0 ? o.output_dt : 0.0;
    detail::drive(
        f, x0, T, o, l,
        [&](double, double t1, const detail::DenseFn& dense) {
            if (o.output_dt > 0.0) {
                while (next_out <= std::min(t1, T) + 1e-12 * T) {
                    double t = std::min(next_out, T);
                    record(t, dense(t));
                    next_out = arc.times.size() * o.output_dt;
                }
                if (t1 >= T && arc.times.back() < T)
                    record(T, dense(T));
            } else {
                double t = std::min(t1, T);
                record(t, dense(t));
            }
            return t1 >= T;
        },
        arc.steps);
    return arc;
}

/// Variational solution of a Hamiltonian (or linear symplectic) field along
/// an arc, as a validated symplectic path.
inline SymplecticPath linearized_flow(const VectorFieldSpec& f, const Vector& x0, double T, IntegrateOptions o = {})
{
    o.variational = true;
    if (o.output_dt <= 0.0)
        o.output_dt = std::max(T / 64.0, 1e-6);
    for (int attempt = 0; attempt < 3; ++attempt) {
        FlowArc arc = integrate(f, x0, T, o);
        try {
            return SymplecticPath(arc.times, arc.variational, {},
                                  PathOptions{.require_identity_start = true, .tol = kTolSymplectic * 10});
        } catch (const ResolutionError&) {
            o.output_dt *= 0.25;
        } catch (const ValidationError&) {
            o.rtol *= 0.01;
            o.atol *= 0.01;
        }
    }
    throw ValidationError("linearized flow lost symplecticity beyond tolerance");
}

/// Event crossing: sign change of g from negative to positive at an
/// accepted page point.
struct SectionSpec
{
    std::function<double(const Vector&)> g;          // section function
    std::function<bool(const Vector&)> interior;      // page interior test
    std::function<Vector(const Vector&)> g_grad;      // optional, for transversality
};

struct SectionHit
{
    double t;
    Vector x;
    double transversality; // dg/dt at the hit
};

inline constexpr double kTangency = 1e-8;

/// First positive crossing of the section after time t_min.
inline SectionHit section_crossing(const VectorFieldSpec& f, const Vector& x0, const SectionSpec& sec, double t_max,
                                   const IntegrateOptions& o = {}, double t_min = 0.0)
{
    detail::Layout l{f.dim, false, false};
    std::optional<SectionHit> hit;
    std::size_t steps = 0;
    const int sub = 4;
    const double tol = 1e-11 * std::max(1.0, t_max);
    Vector xb(f.dim);
    auto g_at = [&](const detail::State& st) {
        xb = Eigen::Map<const Vector>(st.data(), f.dim);
        return sec.g(xb);
    };
    detail::drive(
        f, x0, t_max, o, l,
        [&](double t0, double t1, const detail::DenseFn& dense) {
            double ta = t0;
            double ga = g_at(dense(ta));
            for (int k = 1; k <= sub; ++k) {
                double tb = t0 + (t1 - t0) * k / sub;
                double gb = g_at(dense(tb));
                if (ga < 0.0 && gb >= 0.0 && tb > t_min) {
                    // Illinois-modified regula falsi on the dense output.
                    double lo = ta, hi = tb, glo = ga, ghi = gb, tc = tb;
                    int side = 0;
                    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
                        tc = (lo * ghi - hi * glo) / (ghi - glo);
                        if (!(tc > lo && tc < hi))
                            tc = 0.5 * (lo + hi);
                        double gc = g_at(dense(tc));
                        if (gc < 0.0) {
                            lo = tc;
                            glo = gc;
                            if (side == -1)
                                ghi *= 0.5;
                            side = -1;
                        } else {
                            hi = tc;
                            ghi = gc;
                            if (side == 1)
                                glo *= 0.5;
                            side = 1;
                            if (gc == 0.0)
                                break;
                        }
                    }
                    Vector xc = detail::projected_state(o, l, dense(tc));
                    if (tc > t_min && (!sec.interior || sec.interior(xc))) {
                        Vector v = f.eval(xc, tc);
                        Vector gg = sec.g_grad ? sec.g_grad(xc) : fd_gradient(sec.g, xc);
                        double tr = gg.dot(v);
                        if (std::abs(tr) < kTangency)
                            throw TangencyError("flow is tangent to the section at t=" + std::to_string(tc));
                        hit = SectionHit{tc, xc, tr};
                        return true;
                    }
                }
                ta = tb;
                ga = gb;
            }
            return false;
        },
        steps);
    if (!hit)
        throw TimeoutError("no section crossing before t=" + std::to_string(t_max));
    return *hit;
}

} // namespace sympath

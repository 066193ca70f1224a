#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "symplectic.hpp"

namespace sympath {

inline constexpr double kGapMax = 0.5;

/// Continuous evaluator t -> psi(t) backing a sampled path.
using PathEvaluator = std::function<Matrix(double)>;

inline Matrix symplectic_inverse(const Matrix& psi)
{
    Matrix om = omega_matrix(static_cast<int>(psi.rows()));
    return -om * psi.transpose() * om;
}

struct PathOptions
{
    bool require_identity_start = true;
    double tol = kTolSymplectic;
    double gap_max = kGapMax;
};

/// A sampled path of symplectic matrices on [0, T].
///
/// Samples are what the path is validated and serialised on. Between samples
/// the path is evaluated either through an attached exact evaluator, or by
/// the one-parameter-subgroup interpolation psi_i exp(s log(psi_i^-1 psi_{i+1})),
/// which stays inside Sp(2n).
class SymplecticPath
{
  public:
    using Options = PathOptions;

    SymplecticPath(std::vector<double> times, std::vector<Matrix> samples, PathEvaluator eval = {})
        : SymplecticPath(std::move(times), std::move(samples), std::move(eval), Options{})
    {
    }

    SymplecticPath(std::vector<double> times, std::vector<Matrix> samples, PathEvaluator eval, Options opts)
        : times_(std::move(times)), samples_(std::move(samples)), eval_(std::move(eval))
    {
        validate(opts);
    }

    /// Samples f on a uniform grid of n_intervals + 1 points and keeps f as
    /// the exact evaluator.
    static SymplecticPath from_function(PathEvaluator f, double horizon, int n_intervals, Options opts = {})
    {
        if (!(horizon > 0.0) || n_intervals < 1)
            throw ValidationError("path horizon must be positive with at least one interval");
        std::vector<double> ts;
        std::vector<Matrix> ms;
        for (int i = 0; i <= n_intervals; ++i) {
            double t = horizon * static_cast<double>(i) / n_intervals;
            ts.push_back(t);
            ms.push_back(f(t));
        }
        return SymplecticPath(std::move(ts), std::move(ms), std::move(f), opts);
    }

    int dim() const { return static_cast<int>(samples_.front().rows()); }
    double horizon() const { return times_.back(); }
    std::size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Matrix>& samples() const { return samples_; }
    const Matrix& front() const { return samples_.front(); }
    const Matrix& back() const { return samples_.back(); }
    bool has_evaluator() const { return static_cast<bool>(eval_); }
    const PathEvaluator& evaluator() const { return eval_; }

    Matrix at(double t) const
    {
        t = std::clamp(t, 0.0, horizon());
        if (eval_)
            return eval_(t);
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
        if (i + 1 >= times_.size())
            return samples_.back();
        double s = (t - times_[i]) / (times_[i + 1] - times_[i]);
        if (s <= 0.0)
            return samples_[i];
        return samples_[i] * step_generator(i, s);
    }

    /// psi'(t) by central differences (one-sided second order at the ends).
    Matrix derivative(double t, double h = -1.0) const
    {
        double T = horizon();
        if (h <= 0.0)
            h = 1e-6 * std::max(1.0, T);
        if (!eval_) {
            // Piecewise one-parameter subgroups: keep the stencil inside one cell.
            auto it = std::upper_bound(times_.begin(), times_.end(), t);
            std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
            if (i + 1 >= times_.size())
                i = times_.size() - 2;
            h = std::min(h, 0.25 * (times_[i + 1] - times_[i]));
        }
        if (t - h < 0.0)
            return (-3.0 * at(t) + 4.0 * at(t + h) - at(t + 2 * h)) / (2 * h);
        if (t + h > T)
            return (3.0 * at(t) - 4.0 * at(t - h) + at(t - 2 * h)) / (2 * h);
        return (at(t + h) - at(t - h)) / (2 * h);
    }

    /// Left-multiplies every sample by m. The result no longer starts at the
    /// identity unless m does.
    SymplecticPath rebased(const Matrix& m) const
    {
        std::vector<Matrix> ms;
        ms.reserve(samples_.size());
        for (const auto& s : samples_)
            ms.push_back(m * s);
        PathEvaluator ev;
        std::vector<double> ts = times_;
        if (eval_) {
            ev = [m, f = eval_](double t) { return Matrix(m * f(t)); };
            refine_gaps(ts, ms, ev, kGapMax);
        }
        return SymplecticPath(std::move(ts), std::move(ms), std::move(ev),
                              Options{.require_identity_start = false, .gap_max = kGapMax});
    }

    /// Inserts evaluator samples until neighbouring samples are within gap_max.
    static void refine_gaps(std::vector<double>& ts, std::vector<Matrix>& ms, const PathEvaluator& ev,
                            double gap_max)
    {
        std::vector<double> t2{ts.front()};
        std::vector<Matrix> m2{ms.front()};
        for (std::size_t i = 1; i < ts.size(); ++i) {
            // Split the cell uniformly, doubling until every gap is small.
            for (int pieces = 2; (ms[i] - m2.back()).norm() > 0.9 * gap_max; pieces *= 2) {
                if (pieces > (1 << 16))
                    throw ResolutionError("path cannot be refined to the required gap");
                std::vector<double> tt;
                std::vector<Matrix> mm;
                bool fine = true;
                Matrix prev = m2.back();
                for (int k = 1; k < pieces; ++k) {
                    double t = ts[i - 1] + (ts[i] - ts[i - 1]) * k / pieces;
                    mm.push_back(ev(t));
                    tt.push_back(t);
                    fine = fine && (mm.back() - prev).norm() <= 0.9 * gap_max;
                    prev = mm.back();
                }
                if (fine && (ms[i] - prev).norm() <= 0.9 * gap_max) {
                    t2.insert(t2.end(), tt.begin(), tt.end());
                    m2.insert(m2.end(), mm.begin(), mm.end());
                    break;
                }
            }
            t2.push_back(ts[i]);
            m2.push_back(ms[i]);
        }
        ts = std::move(t2);
        ms = std::move(m2);
    }

    /// The path restricted to [0, t_end] (t_end becomes the last sample).
    SymplecticPath truncated(double t_end, double gap_max = kGapMax) const
    {
        if (!(t_end > 0.0) || t_end > horizon() * (1 + 1e-14))
            throw ValidationError("truncation time must lie in (0, T]");
        std::vector<double> ts;
        std::vector<Matrix> ms;
        for (std::size_t i = 0; i < times_.size() && times_[i] < t_end; ++i) {
            ts.push_back(times_[i]);
            ms.push_back(samples_[i]);
        }
        if (t_end - ts.back() < 1e-12 * std::max(1.0, t_end)) {
            ts.pop_back();
            ms.pop_back();
        }
        if (ts.empty()) {
            ts.push_back(0.0);
            ms.push_back(samples_.front());
        }
        ts.push_back(t_end);
        ms.push_back(at(t_end));
        PathEvaluator ev = eval_ ? eval_ : PathEvaluator([copy = *this](double t) { return copy.at(t); });
        Options o{.require_identity_start = false, .gap_max = gap_max};
        return SymplecticPath(std::move(ts), std::move(ms), std::move(ev), o);
    }

  private:
    Matrix step_generator(std::size_t i, double s) const
    {
        Matrix step = symplectic_inverse(samples_[i]) * samples_[i + 1];
        Matrix lg = step.log();
        if (!lg.allFinite())
            return Matrix::Identity(step.rows(), step.cols()) + s * (step - Matrix::Identity(step.rows(), step.cols()));
        return (s * lg).exp();
    }

    void validate(const Options& opts)
    {
        if (times_.empty() || times_.size() != samples_.size())
            throw ValidationError("path needs matching, non-empty time and sample lists");
        if (times_.front() != 0.0)
            throw ValidationError("path times must start at 0");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i] > times_[i - 1]))
                throw ValidationError("path times must be strictly increasing");
        if (times_.size() < 2)
            throw ValidationError("path needs at least two samples");
        int d = static_cast<int>(samples_.front().rows());
        for (const auto& m : samples_) {
            if (m.rows() != d || m.cols() != d)
                throw ValidationError("all path samples must share one dimension");
            require_symplectic(m, std::max(opts.tol, 1e-9));
        }
        if (opts.require_identity_start &&
            (samples_.front() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > opts.tol)
            throw ValidationError("path must start at the identity");
        for (std::size_t i = 1; i < samples_.size(); ++i) {
            double gap = (samples_[i] - samples_[i - 1]).norm();
            if (gap > opts.gap_max)
                throw ResolutionError("consecutive samples differ by " + std::to_string(gap) + " at t=" +
                                      std::to_string(times_[i]) + "; refine the grid");
        }
    }

    std::vector<double> times_;
    std::vector<Matrix> samples_;
    PathEvaluator eval_;
};

/// Catenation: p2 is left-multiplied by the final matrix of p1 and shifted
/// in time so the result is continuous.
inline SymplecticPath catenate(const SymplecticPath& p1, const SymplecticPath& p2, double gap_max = kGapMax)
{
    if (p1.dim() != p2.dim())
        throw ValidationError("catenated paths must share a dimension");
    Matrix end = p1.back();
    Matrix joint = end * p2.front();
    double jump = (joint - end).norm();
    if (jump > gap_max)
        throw ResolutionError("catenation joint is discontinuous (jump " + std::to_string(jump) + ")");
    double T1 = p1.horizon();
    std::vector<double> ts = p1.times();
    std::vector<Matrix> ms = p1.samples();
    for (std::size_t i = 1; i < p2.size(); ++i) {
        ts.push_back(T1 + p2.times()[i]);
        ms.push_back(end * p2.samples()[i]);
    }
    PathEvaluator ev = [p1, p2, end, T1](double t) -> Matrix {
        if (t <= T1)
            return p1.at(t);
        return end * p2.at(t - T1);
    };
    SymplecticPath::refine_gaps(ts, ms, ev, gap_max);
    SymplecticPath::Options o;
    o.require_identity_start = false;
    o.gap_max = std::max(gap_max, jump + 1e-12);
    return SymplecticPath(std::move(ts), std::move(ms), std::move(ev), o);
}

/// The time-reversed path s -> psi(T - s), rebased to start where psi ends.
inline SymplecticPath reversed(const SymplecticPath& p)
{
    double T = p.horizon();
    std::vector<double> ts;
    std::vector<Matrix> ms;
    for (std::size_t i = p.size(); i-- > 0;) {
        ts.push_back(T - p.times()[i]);
        ms.push_back(p.samples()[i]);
    }
    ts.front() = 0.0;
    PathEvaluator ev = [p, T](double s) { return p.at(T - s); };
    return SymplecticPath(std::move(ts), std::move(ms), std::move(ev), {.require_identity_start = false});
}

namespace paths {

/// t -> rotation(rate * t) in every conjugate pair, on [0, horizon].
inline SymplecticPath rotation(double rate, double horizon, int dim = 2, int n_intervals = 0)
{
    if (n_intervals <= 0)
        n_intervals = std::max(8, static_cast<int>(std::ceil(std::abs(rate) * horizon / 0.2)));
    return SymplecticPath::from_function([rate, dim](double t) { return pair_rotation(dim, rate * t); }, horizon,
                                         n_intervals);
}

inline SymplecticPath constant_identity(double horizon, int dim = 2, int n_intervals = 8)
{
    return SymplecticPath::from_function([dim](double) { return Matrix(Matrix::Identity(dim, dim)); }, horizon,
                                         n_intervals);
}

/// t -> [[1, slope t], [0, 1]].
inline SymplecticPath shear(double slope, double horizon, int n_intervals = 16)
{
    return SymplecticPath::from_function(
        [slope](double t) {
            Matrix m(2, 2);
            m << 1.0, slope * t, 0.0, 1.0;
            return m;
        },
        horizon, n_intervals);
}

/// Path from the identity with piecewise-constant velocities in sp(2n):
/// psi(t) = psi(t_i) exp((t - t_i) A_i), A_i = -Omega S_i with S_i symmetric
/// Gaussian scaled by speed. The grid is refined until the samples validate.
inline SymplecticPath random_lie(std::mt19937_64& rng, int dim, int pieces, double horizon, double speed)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix om = omega_matrix(dim);
    std::vector<Matrix> gens;
    for (int i = 0; i < pieces; ++i) {
        Matrix s(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                s(r, c) = nd(rng);
        s = (0.5 * speed * (s + s.transpose())).eval();
        gens.push_back(-om * s);
    }
    double h = horizon / pieces;
    std::vector<Matrix> knots{Matrix::Identity(dim, dim)};
    for (int i = 0; i < pieces; ++i) {
        Matrix next = knots.back() * (gens[i] * h).exp();
        knots.push_back(next);
    }
    auto eval = [gens, knots, h, pieces](double t) -> Matrix {
        int i = std::clamp(static_cast<int>(t / h), 0, pieces - 1);
        return Matrix(knots[i] * (gens[i] * (t - i * h)).exp());
    };
    double max_norm = 0.0;
    for (const auto& g : gens)
        max_norm = std::max(max_norm, g.norm());
    int n = std::max(pieces * 4, static_cast<int>(std::ceil(horizon * max_norm * 8)));
    n = ((n + pieces - 1) / pieces) * pieces; // piece boundaries stay on the grid
    for (;; n *= 2) {
        try {
            return SymplecticPath::from_function(eval, horizon, n, {.require_identity_start = true, .tol = 1e-9});
        } catch (const ResolutionError&) {
            if (n > 100000)
                throw;
        }
    }
}

} // namespace paths
} // namespace sympath

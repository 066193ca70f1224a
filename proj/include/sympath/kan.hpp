#pragma once

// Iwasawa (KAN) chart of Sp(2): m = rotation(angle) diag(scale, 1/scale) [[1, shear], [0, 1]].

#include <cmath>
#include <functional>
#include <numbers>

#include "path.hpp"

namespace sympath {

struct KanFactors
{
    double angle = 0.0; // radians, in (-pi, pi]
    double scale = 1.0; // > 0
    double shear = 0.0;
};

inline Matrix kan_compose(const KanFactors& f)
{
    Matrix d(2, 2), n(2, 2);
    d << f.scale, 0.0, 0.0, 1.0 / f.scale;
    n << 1.0, f.shear, 0.0, 1.0;
    return rotation2(f.angle) * d * n;
}

inline KanFactors kan_decompose(const Matrix& m)
{
    if (m.rows() != 2 || m.cols() != 2)
        throw ValidationError("KAN decomposition needs a 2x2 matrix");
    require_symplectic(m);
    double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    double r = std::hypot(a, c);
    return {std::atan2(c, a), r, (a * b + c * d) / (r * r)};
}

/// Continuous lift of the KAN angle along the samples, starting from the
/// principal angle of the first sample. Consecutive samples may not move the
/// angle by more than pi/2.
inline std::vector<double> kan_angle_lift(const SymplecticPath& path)
{
    if (path.dim() != 2)
        throw ValidationError("KAN angle is defined on Sp(2) only");
    std::vector<double> lift;
    lift.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Matrix& m = path.samples()[i];
        double raw = std::atan2(m(1, 0), m(0, 0));
        if (lift.empty()) {
            lift.push_back(raw);
            continue;
        }
        double prev = lift.back();
        double step = std::remainder(raw - prev, 2.0 * std::numbers::pi);
        if (std::abs(step) > 0.25 * std::numbers::pi && path.has_evaluator()) {
            // Follow the angle through bisected intermediate evaluations.
            auto angle = [&](double t) {
                Matrix q = path.at(t);
                return std::atan2(q(1, 0), q(0, 0));
            };
            std::function<double(double, double, double, double, int)> follow;
            follow = [&](double t0, double a0, double t1, double r1, int depth) -> double {
                double s = std::remainder(r1 - a0, 2.0 * std::numbers::pi);
                if (std::abs(s) <= 0.25 * std::numbers::pi)
                    return a0 + s;
                if (depth > 48)
                    throw ResolutionError("KAN angle jumps by " + std::to_string(s) + " near t=" +
                                          std::to_string(t0) + "; refine the grid");
                double tm = 0.5 * (t0 + t1);
                double am = follow(t0, a0, tm, angle(tm), depth + 1);
                return follow(tm, am, t1, r1, depth + 1);
            };
            double a = follow(path.times()[i - 1], prev, path.times()[i], raw, 0);
            step = a - prev;
        }
        else if (std::abs(step) > 0.5 * std::numbers::pi)
            throw ResolutionError("KAN angle jumps by " + std::to_string(step) + " near t=" +
                                  std::to_string(path.times()[i]) + "; refine the grid");
        lift.push_back(prev + step);
    }
    return lift;
}

/// Real winding number of the KAN angle over the path.
inline double kan_winding(const SymplecticPath& path)
{
    auto lift = kan_angle_lift(path);
    return (lift.back() - lift.front()) / (2.0 * std::numbers::pi);
}

} // namespace sympath

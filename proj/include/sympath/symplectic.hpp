#pragma once

// Linear symplectic algebra on R^{2n} with coordinates ordered in
// conjugate pairs (x1, y1, x2, y2, ...). The standard form is
// omega0(u, w) = sum_j (u_xj w_yj - u_yj w_xj) = u^T Omega w.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "errors.hpp"

namespace sympath {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kTolSymplectic = 1e-10;

/// Matrix of the standard symplectic form, block-diagonal in [[0,1],[-1,0]].
inline Matrix omega_matrix(int dim)
{
    if (dim <= 0 || dim % 2 != 0)
        throw ValidationError("symplectic dimension must be a positive even integer, got " + std::to_string(dim));
    Matrix m = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; j += 2) {
        m(j, j + 1) = 1.0;
        m(j + 1, j) = -1.0;
    }
    return m;
}

/// The standard complex structure I (multiplication by i in each pair).
/// omega0(a, b) = <I a, b>.
inline Matrix complex_structure(int dim) { return omega_matrix(dim).transpose(); }

inline double omega0(const Vector& u, const Vector& w)
{
    double s = 0.0;
    for (Eigen::Index j = 0; j + 1 < u.size(); j += 2)
        s += u(j) * w(j + 1) - u(j + 1) * w(j);
    return s;
}

/// Rotation by angle theta in every conjugate pair, exp(theta I).
inline Matrix pair_rotation(int dim, double theta)
{
    Matrix m = Matrix::Zero(dim, dim);
    double c = std::cos(theta), s = std::sin(theta);
    for (int j = 0; j < dim; j += 2) {
        m(j, j) = c;
        m(j, j + 1) = -s;
        m(j + 1, j) = s;
        m(j + 1, j + 1) = c;
    }
    return m;
}

inline Matrix rotation2(double theta) { return pair_rotation(2, theta); }

/// sup-norm of psi^T Omega psi - Omega.
inline double symplectic_residual(const Matrix& psi)
{
    Matrix om = omega_matrix(static_cast<int>(psi.rows()));
    return (psi.transpose() * om * psi - om).cwiseAbs().maxCoeff();
}

/// sup-norm of A^T Omega + Omega A, zero iff A is in sp(2n).
inline double lie_algebra_residual(const Matrix& a)
{
    Matrix om = omega_matrix(static_cast<int>(a.rows()));
    return (a.transpose() * om + om * a).cwiseAbs().maxCoeff();
}

/// Throws ValidationError unless psi is square, even-sized, symplectic and
/// unimodular within tol.
inline void require_symplectic(const Matrix& psi, double tol = kTolSymplectic)
{
    if (psi.rows() != psi.cols() || psi.rows() % 2 != 0 || psi.rows() == 0)
        throw ValidationError("symplectic matrix must be square of even size");
    double scale = std::max(1.0, psi.cwiseAbs().maxCoeff());
    double res = symplectic_residual(psi);
    if (res > tol * scale * scale)
        throw ValidationError("matrix is not symplectic: residual " + std::to_string(res));
    double det = psi.determinant();
    if (std::abs(det - 1.0) > tol * std::pow(scale, psi.rows()))
        throw ValidationError("symplectic matrix must have determinant 1, got " + std::to_string(det));
}

/// Half-integer stored as a count of halves, so index arithmetic is exact.
class HalfInteger
{
  public:
    constexpr HalfInteger() = default;
    static constexpr HalfInteger from_halves(std::int64_t h) { return HalfInteger(h); }
    static constexpr HalfInteger from_int(std::int64_t v) { return HalfInteger(2 * v); }

    constexpr std::int64_t halves() const { return halves_; }
    constexpr double value() const { return 0.5 * static_cast<double>(halves_); }
    constexpr bool is_integer() const { return halves_ % 2 == 0; }

    friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return HalfInteger(a.halves_ + b.halves_); }
    friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return HalfInteger(a.halves_ - b.halves_); }
    friend constexpr HalfInteger operator-(HalfInteger a) { return HalfInteger(-a.halves_); }
    HalfInteger& operator+=(HalfInteger o)
    {
        halves_ += o.halves_;
        return *this;
    }
    friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
    friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

    friend std::ostream& operator<<(std::ostream& os, HalfInteger h)
    {
        if (h.is_integer())
            return os << h.halves_ / 2;
        return os << h.halves_ << "/2";
    }

  private:
    constexpr explicit HalfInteger(std::int64_t h) : halves_(h) {}
    std::int64_t halves_ = 0;
};

} // namespace sympath

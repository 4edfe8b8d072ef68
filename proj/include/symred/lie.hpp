#pragma once

// SO(3) / so(3) / so(3)* kernel: hat/vee, Rodrigues exponential,
// adjoint and coadjoint actions, polar reorthonormalization.

#include <cmath>

#include <Eigen/Dense>

#include "symred/types.hpp"

namespace symred::lie {

inline Matrix3 hat(const AlgebraVector& v) {
    Matrix3 s;
    s << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return s;
}

inline AlgebraVector vee(const Matrix3& s, double tol = 1e-10) {
    if ((s + s.transpose()).norm() > tol)
        throw NotSkew("vee: matrix is not skew-symmetric");
    return AlgebraVector(s(2, 1), s(0, 2), s(1, 0));
}

/// Rodrigues formula with a Taylor branch near the identity to avoid
/// sin(t)/t cancellation.
inline Rotation exp_so3(const AlgebraVector& v) {
    const double theta2 = v.squaredNorm();
    const Matrix3 k = hat(v);
    double a, b; // exp = I + a K + b K^2
    if (theta2 < 1e-8) {
        a = 1.0 - theta2 / 6.0 * (1.0 - theta2 / 20.0);
        b = 0.5 * (1.0 - theta2 / 12.0 * (1.0 - theta2 / 30.0));
    } else {
        const double theta = std::sqrt(theta2);
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / theta2;
    }
    return Rotation(Matrix3::Identity() + a * k + b * (k * k));
}

/// Coadjoint infinitesimal action: ad*_xi(mu) = mu x xi under the R^3
/// identification. This sign reproduces the Euler drift mu x Lambda(mu).
inline CoalgebraVector ad_star(const AlgebraVector& xi, const CoalgebraVector& mu) {
    return mu.cross(xi);
}

/// Coadjoint action Ad*_g(mu) = g^T mu, fixed by <Ad*_g mu, xi> = <mu, g xi>.
inline CoalgebraVector Ad_star(const Rotation& g, const CoalgebraVector& mu) {
    return g.transpose() * mu;
}

/// Adjoint action Ad_g(v) = g v.
inline AlgebraVector Ad(const Rotation& g, const AlgebraVector& v) {
    return g * v;
}

inline double orthogonality_defect(const Matrix3& m) {
    return (m.transpose() * m - Matrix3::Identity()).norm();
}

inline bool is_rotation(const Matrix3& m, double tol = 1e-10) {
    return orthogonality_defect(m) <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

/// Nearest rotation in Frobenius norm (polar factor).
inline Rotation reorthonormalize(const Matrix3& m) {
    const double det = m.determinant();
    if (!(det > 0.0) || !m.allFinite())
        throw Degenerate("reorthonormalize: determinant must be positive");
    Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() <= 0.0)
        throw Degenerate("reorthonormalize: singular matrix");
    Rotation r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Matrix3 u = svd.matrixU();
        u.col(2) *= -1.0;
        r = u * svd.matrixV().transpose();
    }
    return r;
}

} // namespace symred::lie

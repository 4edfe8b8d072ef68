#pragma once

// Stratonovich integrators: predictor-corrector (Heun) for vector
// states, exponential updates for group states, and a combined scheme
// for trivialized G x g* states. Plus strong-error metrics and
// convergence-order fitting.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "symred/lie.hpp"
#include "symred/noise.hpp"
#include "symred/systems.hpp"

namespace symred {

struct IntegratorOptions {
    double state_bound = 1e8;     // explosion detection on the state norm
    double increment_bound = 10.; // per-step algebra increment bound (rad)
    int renorm_every = 32;        // polar repair cadence for group states
};

inline VectorTrajectory integrate_heun(const VectorSystem& sys, const NoisePath& noise,
                                       const VectorX& z0,
                                       const IntegratorOptions& opts = {}) {
    const int K = noise.steps();
    const int n = sys.state_dim;
    VectorTrajectory traj;
    traj.times = noise.times;
    traj.states.resize(K + 1, n);
    traj.states.row(0) = z0.transpose();
    const MatrixX xs = noise.positions();
    VectorX z = z0;
    for (int k = 0; k < K; ++k) {
        const VectorX dx = noise.increments.row(k).transpose();
        const VectorX drift = sys.fields(xs.row(k).transpose(), z) * dx;
        const VectorX zp = z + drift;
        z += 0.5 * (drift + sys.fields(xs.row(k + 1).transpose(), zp) * dx);
        if (!z.allFinite() || z.norm() > opts.state_bound)
            throw Diverged("integrate_heun: state escaped at t = " +
                           std::to_string(noise.times[k + 1]));
        traj.states.row(k + 1) = z.transpose();
    }
    return traj;
}

namespace detail {

inline Rotation group_step(const Rotation& g, const AlgebraVector& w, bool right) {
    return right ? Rotation(lie::exp_so3(w) * g) : Rotation(g * lie::exp_so3(w));
}

} // namespace detail

inline GroupTrajectory integrate_group(const GroupSystem& sys, const NoisePath& noise,
                                       const Rotation& g0,
                                       const IntegratorOptions& opts = {}) {
    const int K = noise.steps();
    GroupTrajectory traj;
    traj.times = noise.times;
    traj.states.reserve(K + 1);
    traj.states.push_back(g0);
    const MatrixX xs = noise.positions();
    Rotation g = g0;
    for (int k = 0; k < K; ++k) {
        const VectorX dx = noise.increments.row(k).transpose();
        const AlgebraVector v = sys.fields(xs.row(k).transpose(), g) * dx;
        const Rotation gp = detail::group_step(g, v, sys.right_invariant);
        const AlgebraVector w =
            0.5 * (v + sys.fields(xs.row(k + 1).transpose(), gp) * dx);
        if (!w.allFinite() || w.norm() > opts.increment_bound)
            throw Diverged("integrate_group: algebra increment exceeded bound");
        g = detail::group_step(g, w, sys.right_invariant);
        if (opts.renorm_every > 0 && (k + 1) % opts.renorm_every == 0)
            g = lie::reorthonormalize(g);
        traj.states.push_back(g);
    }
    return traj;
}

enum class ProductScheme {
    Heun,     // Heun update of the momentum factor
    Geometric // coadjoint rotation of the momentum factor (orbit preserving)
};

/// One Stratonovich step on G x g*. The geometric variant moves mu by
/// the same exponential that moves g, so coadjoint orbits and the
/// spatial momentum are preserved to rounding.
inline ProductTrajectory integrate_product(const ProductSystem& sys, const NoisePath& noise,
                                           const Rotation& g0, const CoalgebraVector& mu0,
                                           ProductScheme scheme = ProductScheme::Heun,
                                           const IntegratorOptions& opts = {}) {
    const int K = noise.steps();
    ProductTrajectory traj;
    traj.times = noise.times;
    traj.rotations.reserve(K + 1);
    traj.rotations.push_back(g0);
    traj.momenta.resize(K + 1, 3);
    traj.momenta.row(0) = mu0.transpose();
    const MatrixX xs = noise.positions();
    Rotation g = g0;
    CoalgebraVector mu = mu0;
    for (int k = 0; k < K; ++k) {
        const VectorX dx = noise.increments.row(k).transpose();
        const VectorX x0 = xs.row(k).transpose();
        const VectorX x1 = xs.row(k + 1).transpose();
        const auto [gv, mv] = sys.fields(x0, g, mu);
        const AlgebraVector v = gv * dx;
        const Vector3 dmu = mv * dx;
        Rotation gp = g * lie::exp_so3(v);
        CoalgebraVector mup = scheme == ProductScheme::Geometric
                                  ? CoalgebraVector(lie::exp_so3(-v) * mu)
                                  : CoalgebraVector(mu + dmu);
        const auto [gv1, mv1] = sys.fields(x1, gp, mup);
        const AlgebraVector w = 0.5 * (v + gv1 * dx);
        if (!w.allFinite() || w.norm() > opts.increment_bound)
            throw Diverged("integrate_product: algebra increment exceeded bound");
        g = g * lie::exp_so3(w);
        if (scheme == ProductScheme::Geometric) {
            mu = lie::exp_so3(-w) * mu;
        } else {
            mu += 0.5 * (dmu + mv1 * dx);
        }
        if (!mu.allFinite() || mu.norm() > opts.state_bound)
            throw Diverged("integrate_product: momentum escaped");
        if (opts.renorm_every > 0 && (k + 1) % opts.renorm_every == 0)
            g = lie::reorthonormalize(g);
        traj.rotations.push_back(g);
        traj.momenta.row(k + 1) = mu.transpose();
    }
    return traj;
}

namespace detail {

/// Stride of a refinement: b's grid must contain a's grid.
inline int refinement_stride(const VectorX& coarse, const VectorX& fine) {
    const int ka = static_cast<int>(coarse.size()) - 1;
    const int kb = static_cast<int>(fine.size()) - 1;
    if (ka < 1 || kb < 1 || kb % ka != 0 ||
        std::abs(coarse[ka] - fine[kb]) > 1e-12 * std::max(1.0, std::abs(fine[kb])))
        throw GridMismatch("strong_error: grids do not nest");
    return kb / ka;
}

} // namespace detail

/// Sup over shared grid times of the state distance. `b` may refine `a`.
inline double strong_error(const VectorTrajectory& a, const VectorTrajectory& b) {
    const bool swap = a.times.size() > b.times.size();
    const VectorTrajectory& coarse = swap ? b : a;
    const VectorTrajectory& fine = swap ? a : b;
    const int stride = detail::refinement_stride(coarse.times, fine.times);
    double err = 0.0;
    for (int k = 0; k < coarse.times.size(); ++k)
        err = std::max(err, (coarse.states.row(k) - fine.states.row(k * stride)).norm());
    return err;
}

inline double strong_error(const GroupTrajectory& a, const GroupTrajectory& b) {
    const bool swap = a.times.size() > b.times.size();
    const GroupTrajectory& coarse = swap ? b : a;
    const GroupTrajectory& fine = swap ? a : b;
    const int stride = detail::refinement_stride(coarse.times, fine.times);
    double err = 0.0;
    for (std::size_t k = 0; k < coarse.states.size(); ++k)
        err = std::max(err, (coarse.states[k] - fine.states[k * stride]).norm());
    return err;
}

inline double strong_error(const ProductTrajectory& a, const ProductTrajectory& b) {
    const bool swap = a.times.size() > b.times.size();
    const ProductTrajectory& coarse = swap ? b : a;
    const ProductTrajectory& fine = swap ? a : b;
    const int stride = detail::refinement_stride(coarse.times, fine.times);
    double err = 0.0;
    for (std::size_t k = 0; k < coarse.rotations.size(); ++k) {
        const double dg = (coarse.rotations[k] - fine.rotations[k * stride]).norm();
        const double dm =
            (coarse.momenta.row(static_cast<int>(k)) -
             fine.momenta.row(static_cast<int>(k * stride)))
                .norm();
        err = std::max(err, std::max(dg, dm));
    }
    return err;
}

/// Least-squares slope of log(error) against log(dt).
inline double convergence_order(const std::vector<std::pair<double, double>>& errs) {
    if (errs.size() < 3)
        throw InsufficientData("convergence_order: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [dt, e] : errs) {
        if (!(dt > 0.0) || !(e > 0.0))
            throw InsufficientData("convergence_order: nonpositive data");
        const double x = std::log(dt), y = std::log(e);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(errs.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace symred

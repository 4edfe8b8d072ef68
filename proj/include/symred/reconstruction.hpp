#pragma once

// Reconstruction pipeline on the trivialized bundle T*G ~ G x g*:
// horizontal lift of a reduced solution, the g-valued phase drive Y,
// and the group phase equation delta g = L(Y, g) delta Y.

#include <functional>

#include "symred/hamiltonian.hpp"
#include "symred/integrate.hpp"
#include "symred/lie.hpp"
#include "symred/noise.hpp"
#include "symred/systems.hpp"

namespace symred {

/// Principal connection one-form on G x g*, evaluated on a tangent
/// vector (dg, dmu) at (g, mu).
struct Connection {
    std::function<AlgebraVector(const Rotation& g, const CoalgebraVector& mu,
                                const Matrix3& dg, const Vector3& dmu)>
        form;
};

/// Right Maurer-Cartan form on the G factor: A(dg) = vee(dg g^-1).
/// Reproduces generators of the lifted left translation and annihilates
/// curves with constant group component.
inline Connection right_maurer_cartan() {
    return {[](const Rotation& g, const CoalgebraVector&, const Matrix3& dg,
               const Vector3&) { return lie::vee(dg * g.transpose(), 1e-6); }};
}

/// Horizontal lift of a reduced path through (g0, mu_0): with the right
/// Maurer-Cartan connection the group component stays constant.
inline ProductTrajectory horizontal_lift(const VectorTrajectory& reduced,
                                         const Rotation& g0) {
    const int n = static_cast<int>(reduced.times.size());
    ProductTrajectory lift;
    lift.times = reduced.times;
    lift.rotations.assign(n, g0);
    lift.momenta = reduced.states.leftCols(3);
    return lift;
}

/// Discretized g-valued drive: increments of Y on the reduced grid.
struct PhaseDrive {
    VectorX times;
    Matrix3X increments; // 3 x K, column k = Delta Y_k
};

/// Y increments from the connection pairing, evaluated on the
/// trivialized bundle: Delta Y_k = sum_i Ad_{g0}(dh_i(mu)) Delta X^i_k
/// with Stratonovich (trapezoidal) averaging of dh_i across the step.
inline PhaseDrive phase_drive(const HamiltonianSpec& spec, const ProductTrajectory& lift,
                              const NoisePath& noise) {
    const int K = noise.steps();
    if (static_cast<int>(lift.times.size()) != K + 1 ||
        (lift.times - noise.times).cwiseAbs().maxCoeff() > 1e-12)
        throw GridMismatch("phase_drive: lift grid does not match the noise grid");
    PhaseDrive drive;
    drive.times = noise.times;
    drive.increments.resize(3, K);
    const Rotation g0 = lift.rotations[0];
    const int r = spec.components();
    for (int k = 0; k < K; ++k) {
        const CoalgebraVector mu0 = lift.momenta.row(k).transpose();
        const CoalgebraVector mu1 = lift.momenta.row(k + 1).transpose();
        AlgebraVector dy = AlgebraVector::Zero();
        for (int i = 0; i < r; ++i)
            dy += 0.5 * (spec.dh[i](mu0) + spec.dh[i](mu1)) * noise.increments(k, i);
        drive.increments.col(k) = lie::Ad(g0, dy);
    }
    return drive;
}

/// Solves delta g = T_e L_g (delta Y): left exponential updates with the
/// averaging already baked into the drive.
inline GroupTrajectory phase_solve(const PhaseDrive& drive,
                                   const Rotation& g_init = Rotation::Identity(),
                                   const IntegratorOptions& opts = {}) {
    const int K = static_cast<int>(drive.increments.cols());
    GroupTrajectory traj;
    traj.times = drive.times;
    traj.states.reserve(K + 1);
    traj.states.push_back(g_init);
    Rotation g = g_init;
    for (int k = 0; k < K; ++k) {
        const AlgebraVector w = drive.increments.col(k);
        if (!w.allFinite() || w.norm() > opts.increment_bound)
            throw Diverged("phase_solve: increment exceeded bound");
        g = g * lie::exp_so3(w);
        if (opts.renorm_every > 0 && (k + 1) % opts.renorm_every == 0)
            g = lie::reorthonormalize(g);
        traj.states.push_back(g);
    }
    return traj;
}

/// Step 1/2/3 composition: horizontal lift, phase drive, phase solve,
/// then Phi_{g^Xi}(d) = (g^Xi_t g0, mu_t).
inline ProductTrajectory reconstruct(const HamiltonianSpec& spec,
                                     const VectorTrajectory& reduced,
                                     const NoisePath& noise, const Rotation& g0) {
    const ProductTrajectory lift = horizontal_lift(reduced, g0);
    const PhaseDrive drive = phase_drive(spec, lift, noise);
    const GroupTrajectory phase = phase_solve(drive);
    ProductTrajectory out;
    out.times = reduced.times;
    out.momenta = lift.momenta;
    out.rotations.reserve(phase.states.size());
    for (const Rotation& p : phase.states) out.rotations.push_back(Rotation(p * g0));
    return out;
}

} // namespace symred

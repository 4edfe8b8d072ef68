#pragma once

// Stochastic Hamiltonian systems in body coordinates on T*SO(3) ~ G x g*:
// full and reduced Stratonovich operators from a vector-valued
// Hamiltonian, momentum maps, and conserved-quantity monitors.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "symred/integrate.hpp"
#include "symred/lie.hpp"
#include "symred/systems.hpp"

namespace symred {

/// h = sum_i h_i eps^i with user-supplied functional derivatives
/// dh_i = delta h_i / delta mu.
struct HamiltonianSpec {
    std::vector<std::function<double(const CoalgebraVector&)>> h;
    std::vector<std::function<AlgebraVector(const CoalgebraVector&)>> dh;
    std::vector<std::string> labels;

    int components() const { return static_cast<int>(h.size()); }
};

struct MomentumValue {
    CoalgebraVector jl; // spatial angular momentum
    CoalgebraVector jr; // body angular momentum
};

/// J_L = Ad*_{g^-1}(mu) = g mu, J_R = mu.
inline MomentumValue momentum(const Rotation& g, const CoalgebraVector& mu) {
    return {lie::Ad_star(g.transpose(), mu), mu};
}

/// Full trivialized operator on G x g*: component i contributes
/// (dh_i(mu), ad*_{dh_i(mu)} mu).
inline ProductSystem full_system(const HamiltonianSpec& spec) {
    return {[spec](const VectorX&, const Rotation&, const CoalgebraVector& mu) {
        const int r = spec.components();
        Matrix3X gv(3, r), mv(3, r);
        for (int i = 0; i < r; ++i) {
            const AlgebraVector d = spec.dh[i](mu);
            gv.col(i) = d;
            mv.col(i) = lie::ad_star(d, mu);
        }
        return std::make_pair(gv, mv);
    }};
}

/// Lie-Poisson reduced operator on g*: component i contributes
/// ad*_{dh_i(mu)} mu = mu x dh_i(mu).
inline VectorSystem reduced_system(const HamiltonianSpec& spec) {
    VectorSystem sys;
    sys.state_dim = 3;
    sys.fields = [spec](const VectorX&, const VectorX& z) {
        const CoalgebraVector mu = z.head<3>();
        const int r = spec.components();
        MatrixX f(3, r);
        for (int i = 0; i < r; ++i) f.col(i) = lie::ad_star(spec.dh[i](mu), mu);
        return f;
    };
    return sys;
}

/// Orbit-preserving reduced integrator: mu_{k+1} = exp(-w_k) mu_k with
/// w_k the Heun-averaged algebra increment sum_i dh_i(mu) dX^i. Realizes
/// coadjoint motion exactly on the sphere |mu| = const.
inline VectorTrajectory integrate_coadjoint(const HamiltonianSpec& spec,
                                            const NoisePath& noise,
                                            const CoalgebraVector& mu0,
                                            const IntegratorOptions& opts = {}) {
    const int K = noise.steps();
    VectorTrajectory traj;
    traj.times = noise.times;
    traj.states.resize(K + 1, 3);
    traj.states.row(0) = mu0.transpose();
    CoalgebraVector mu = mu0;
    const int r = spec.components();
    auto increment = [&](const CoalgebraVector& m, const VectorX& dx) {
        AlgebraVector w = AlgebraVector::Zero();
        for (int i = 0; i < r; ++i) w += spec.dh[i](m) * dx[i];
        return w;
    };
    for (int k = 0; k < K; ++k) {
        const VectorX dx = noise.increments.row(k).transpose();
        const AlgebraVector v = increment(mu, dx);
        const CoalgebraVector mup = lie::exp_so3(-v) * mu;
        const AlgebraVector w = 0.5 * (v + increment(mup, dx));
        if (!w.allFinite() || w.norm() > opts.increment_bound)
            throw Diverged("integrate_coadjoint: increment exceeded bound");
        mu = lie::exp_so3(-w) * mu;
        traj.states.row(k + 1) = mu.transpose();
    }
    return traj;
}

/// Geometric full solve: the group and momentum factors move by the same
/// exponential, so J_L and the Casimir are conserved to rounding.
inline ProductTrajectory integrate_hamiltonian(const HamiltonianSpec& spec,
                                               const NoisePath& noise, const Rotation& g0,
                                               const CoalgebraVector& mu0,
                                               ProductScheme scheme = ProductScheme::Heun,
                                               const IntegratorOptions& opts = {}) {
    return integrate_product(full_system(spec), noise, g0, mu0, scheme, opts);
}

/// |J_L(g_t, mu_t) - J_L(g_0, mu_0)| per step; attached as "noether".
inline VectorX noether_monitor(ProductTrajectory& traj) {
    const int n = static_cast<int>(traj.rotations.size());
    VectorX drift(n);
    const CoalgebraVector jl0 =
        momentum(traj.rotations[0], traj.momenta.row(0).transpose()).jl;
    for (int k = 0; k < n; ++k) {
        const CoalgebraVector jl =
            momentum(traj.rotations[k], traj.momenta.row(k).transpose()).jl;
        drift[k] = (jl - jl0).norm();
    }
    traj.monitors["noether"] = drift;
    return drift;
}

/// |mu_t|^2 - |mu_0|^2 per step; attached as "casimir".
template <class Trajectory>
inline VectorX casimir_monitor(Trajectory& traj, const MatrixX& momenta) {
    const int n = static_cast<int>(momenta.rows());
    VectorX drift(n);
    const double c0 = momenta.row(0).squaredNorm();
    for (int k = 0; k < n; ++k) drift[k] = momenta.row(k).squaredNorm() - c0;
    traj.monitors["casimir"] = drift;
    return drift;
}

inline VectorX casimir_monitor(VectorTrajectory& traj) {
    return casimir_monitor(traj, traj.states);
}

inline VectorX casimir_monitor(ProductTrajectory& traj) {
    return casimir_monitor(traj, traj.momenta);
}

/// h_0 along the momentum component; attached as "energy".
inline VectorX energy_monitor(ProductTrajectory& traj, const HamiltonianSpec& spec) {
    const int n = static_cast<int>(traj.momenta.rows());
    VectorX e(n);
    for (int k = 0; k < n; ++k) e[k] = spec.h[0](traj.momenta.row(k).transpose());
    traj.monitors["energy"] = e;
    return e;
}

inline void momentum_monitors(ProductTrajectory& traj) {
    const int n = static_cast<int>(traj.rotations.size());
    VectorX jx(n), jy(n), jz(n);
    for (int k = 0; k < n; ++k) {
        const CoalgebraVector jl =
            momentum(traj.rotations[k], traj.momenta.row(k).transpose()).jl;
        jx[k] = jl.x(); jy[k] = jl.y(); jz[k] = jl.z();
    }
    traj.monitors["jl_x"] = jx;
    traj.monitors["jl_y"] = jy;
    traj.monitors["jl_z"] = jz;
}

inline Vector3 numeric_gradient(const std::function<double(const CoalgebraVector&)>& f,
                                const CoalgebraVector& mu, double step = 1e-5) {
    Vector3 g;
    for (int j = 0; j < 3; ++j) {
        CoalgebraVector hi = mu, lo = mu;
        hi[j] += step;
        lo[j] -= step;
        g[j] = (f(hi) - f(lo)) / (2.0 * step);
    }
    return g;
}

/// Central-difference check of the supplied functional derivatives.
inline double verify_derivatives(const HamiltonianSpec& spec, int samples,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const CoalgebraVector mu(gauss(rng), gauss(rng), gauss(rng));
        for (int i = 0; i < spec.components(); ++i)
            worst = std::max(
                worst, (numeric_gradient(spec.h[i], mu) - Vector3(spec.dh[i](mu))).norm());
    }
    return worst;
}

struct ConservationReport {
    double max_bracket = 0.0;
    bool pass = false;
    std::string to_text() const {
        return "max_bracket: " + std::to_string(max_bracket) +
               "\npass: " + (pass ? std::string("true") : std::string("false")) + "\n";
    }
};

/// Strong conservation: f is strongly conserved iff {f, h_i} = 0 for all
/// i, with the minus Lie-Poisson bracket {f,g}(mu) = -mu . (grad f x grad g).
inline ConservationReport strong_conservation_check(
    const HamiltonianSpec& spec, const std::function<double(const CoalgebraVector&)>& f,
    int samples, std::uint64_t seed, double tol = 1e-8) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ConservationReport rep;
    for (int s = 0; s < samples; ++s) {
        const CoalgebraVector mu(gauss(rng), gauss(rng), gauss(rng));
        const Vector3 gf = numeric_gradient(f, mu);
        for (int i = 0; i < spec.components(); ++i) {
            const Vector3 gh = spec.dh[i](mu);
            rep.max_bracket = std::max(rep.max_bracket, std::abs(-mu.dot(gf.cross(gh))));
        }
    }
    rep.pass = rep.max_bracket <= tol;
    return rep;
}

} // namespace symred

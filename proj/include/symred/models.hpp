#pragma once

// Worked systems: rigid body under random impacts, loose body with a
// random inertia tensor, collective motion, Brownian motion on the
// sphere, and the skew-product factorization demo.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symred/hamiltonian.hpp"
#include "symred/integrate.hpp"
#include "symred/lie.hpp"
#include "symred/noise.hpp"
#include "symred/reconstruction.hpp"
#include "symred/systems.hpp"

namespace symred::models {

struct ModelConfig {
    std::string name = "rigid_impact";
    InertiaMap lambda = (Vector3(1.0, 0.5, 1.0 / 3.0)).asDiagonal(); // inverse inertia
    double sigma = 1.0;   // impact-noise amplitude
    double epsilon = 0.1; // loose-body perturbation scale
    double T = 1.0;
    int steps = 1000;
    std::uint64_t seed = 0;
    Rotation g0 = Rotation::Identity();
    CoalgebraVector mu0 = CoalgebraVector(1.0, 1.0, 1.0);
    Vector3 sphere_point = Vector3(0.0, 0.0, 1.0);

    void validate() const {
        if (!(T > 0.0) || steps < 1) throw BadConfig("need T > 0 and steps >= 1");
        if ((lambda - lambda.transpose()).norm() > 1e-12)
            throw BadConfig("lambda must be symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix3> es(lambda);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw BadConfig("lambda must be positive definite");
        if (std::abs(sphere_point.norm() - 1.0) > 1e-10)
            throw BadConfig("sphere_point must be unit length");
    }
};

inline std::vector<std::string> model_names() {
    return {"rigid_impact", "loose_body", "collective", "sphere_bm", "skew_demo"};
}

struct HamiltonianModel {
    HamiltonianSpec spec;
    ProductSystem full;
    VectorSystem reduced;
    int noise_dim = 0; // Brownian components (time excluded)
};

/// Free kinetic energy h0(mu) = 1/2 <mu, Lambda mu>.
inline void append_kinetic(HamiltonianSpec& spec, const InertiaMap& lambda) {
    spec.h.push_back([lambda](const CoalgebraVector& mu) { return 0.5 * mu.dot(lambda * mu); });
    spec.dh.push_back([lambda](const CoalgebraVector& mu) { return AlgebraVector(lambda * mu); });
    spec.labels.push_back("h0");
}

/// Rigid body under random impacts: h = (h0, sigma J_R), so the reduced
/// equations are delta mu = mu x Lambda(mu) dt + sigma sum_i (mu x e_i) dY^i.
inline HamiltonianModel rigid_impact(const ModelConfig& cfg) {
    cfg.validate();
    HamiltonianModel m;
    append_kinetic(m.spec, cfg.lambda);
    for (int i = 0; i < 3; ++i) {
        const AlgebraVector xi = cfg.sigma * Vector3::Unit(i);
        m.spec.h.push_back([xi](const CoalgebraVector& mu) { return mu.dot(xi); });
        m.spec.dh.push_back([xi](const CoalgebraVector&) { return xi; });
        m.spec.labels.push_back("jr_" + std::to_string(i));
    }
    m.full = full_system(m.spec);
    m.reduced = reduced_system(m.spec);
    m.noise_dim = 3;
    return m;
}

/// Orthonormal basis of symmetric 3x3 maps used for the loose-body noise.
inline std::array<Matrix3, 6> symmetric_basis() {
    std::array<Matrix3, 6> basis;
    int a = 0;
    for (int i = 0; i < 3; ++i)
        basis[a++] = Vector3::Unit(i) * Vector3::Unit(i).transpose();
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            basis[a++] = s * (Vector3::Unit(i) * Vector3::Unit(j).transpose() +
                              Vector3::Unit(j) * Vector3::Unit(i).transpose());
    return basis;
}

/// Random inertia tensor: delta mu = mu x Lambda(mu) dt
/// + eps sum_a mu x (E_a mu) dA^a over the symmetric-matrix basis.
inline HamiltonianModel loose_body(const ModelConfig& cfg) {
    cfg.validate();
    HamiltonianModel m;
    append_kinetic(m.spec, cfg.lambda);
    for (const Matrix3& e : symmetric_basis()) {
        const Matrix3 scaled = cfg.epsilon * e;
        m.spec.h.push_back(
            [scaled](const CoalgebraVector& mu) { return 0.5 * mu.dot(scaled * mu); });
        m.spec.dh.push_back(
            [scaled](const CoalgebraVector& mu) { return AlgebraVector(scaled * mu); });
        m.spec.labels.push_back("inertia_" + std::to_string(m.spec.labels.size()));
    }
    m.full = full_system(m.spec);
    m.reduced = reduced_system(m.spec);
    m.noise_dim = 6;
    return m;
}

/// Collective Hamiltonian h = (h0, sigma f o J_R) with f = 1/2 |mu|^2.
/// The reduced noise fields vanish identically, so the reduction is
/// deterministic while the group motion stays stochastic.
inline HamiltonianModel collective(const ModelConfig& cfg) {
    cfg.validate();
    HamiltonianModel m;
    append_kinetic(m.spec, cfg.lambda);
    const double s = cfg.sigma;
    m.spec.h.push_back([s](const CoalgebraVector& mu) { return 0.5 * s * mu.squaredNorm(); });
    m.spec.dh.push_back([s](const CoalgebraVector& mu) { return AlgebraVector(s * mu); });
    m.spec.labels.push_back("collective");
    m.full = full_system(m.spec);
    m.reduced = reduced_system(m.spec);
    m.noise_dim = 1;
    return m;
}

struct SphereBmModel {
    GroupSystem group;
    Vector3 base_point;

    Vector3 project(const Rotation& g) const { return g * base_point; }
};

/// Right-invariant SDE delta g = sum_i xi_i^G(g) dB^i on SO(3); the
/// projection g . p0 is Brownian motion on the sphere with generator
/// (1/2) Laplace-Beltrami (all three generators driven, the vertical one
/// acts trivially at the pole of its axis; the total Casimir sum of
/// squared generators restricts to the spherical Laplacian).
inline SphereBmModel sphere_bm(const ModelConfig& cfg) {
    cfg.validate();
    SphereBmModel m;
    m.base_point = cfg.sphere_point;
    m.group.right_invariant = true;
    const double s = cfg.sigma;
    m.group.fields = [s](const VectorX&, const Rotation&) {
        // driftless: the time component (column 0) gets a zero field
        Matrix3X f = Matrix3X::Zero(3, 4);
        f.rightCols<3>() = s * Matrix3::Identity();
        return f;
    };
    return m;
}

/// Planted non-equivariant counterexample for the invariance checker:
/// sigma(z) = (z1^2, 0) is not equivariant under planar rotations.
inline VectorSystem planted_counterexample() {
    VectorSystem sys;
    sys.state_dim = 2;
    sys.fields = [](const VectorX&, const VectorX& z) {
        MatrixX f = MatrixX::Zero(2, 1);
        f(0, 0) = z[0] * z[0];
        return f;
    };
    return sys;
}

/// Rotation-equivariant linear field sigma(z) = z.
inline VectorSystem equivariant_linear_field(int dim) {
    VectorSystem sys;
    sys.state_dim = dim;
    sys.fields = [dim](const VectorX&, const VectorX& z) {
        MatrixX f(dim, 1);
        f.col(0) = z;
        return f;
    };
    return sys;
}

struct SkewReport {
    double sup_distance = 0.0;        // factorized vs direct solution
    double base_group_dependence = 0.0; // defect of S2 on the group coordinate
    bool pass = false;

    std::string to_text() const {
        return "sup_distance: " + std::to_string(sup_distance) +
               "\nbase_group_dependence: " + std::to_string(base_group_dependence) +
               "\npass: " + (pass ? std::string("true") : std::string("false")) + "\n";
    }
};

/// Skew-product factorization on the trivial bundle G x g* with section
/// sigma(mu) = (e, mu): base factor S2 = reduced Lie-Poisson operator,
/// fiber factor S1 = phase operator. Verifies pathwise that
/// F(g, mu) = (g g0, mu) maps the factorized pair onto the direct solve.
inline SkewReport skew_demo(const ModelConfig& cfg, double tol = 1e-2) {
    cfg.validate();
    const HamiltonianModel m = rigid_impact(cfg);
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, cfg.steps, cfg.seed);

    const ProductTrajectory direct =
        integrate_product(m.full, noise, cfg.g0, cfg.mu0, ProductScheme::Heun);
    const VectorTrajectory base = integrate_heun(m.reduced, noise, cfg.mu0);
    const ProductTrajectory factored = reconstruct(m.spec, base, noise, cfg.g0);

    SkewReport rep;
    rep.sup_distance = strong_error(direct, factored);

    // S2 must not see the fiber coordinate: evaluate the mu-part of the
    // full operator at two group points.
    std::mt19937_64 rng(cfg.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 32; ++s) {
        const CoalgebraVector mu(gauss(rng), gauss(rng), gauss(rng));
        const Rotation ga = lie::exp_so3(AlgebraVector(gauss(rng), gauss(rng), gauss(rng)));
        const Rotation gb = lie::exp_so3(AlgebraVector(gauss(rng), gauss(rng), gauss(rng)));
        VectorX x = VectorX::Zero(4);
        const auto [gva, mva] = m.full.fields(x, ga, mu);
        const auto [gvb, mvb] = m.full.fields(x, gb, mu);
        rep.base_group_dependence =
            std::max(rep.base_group_dependence, (mva - mvb).norm());
    }
    rep.pass = rep.sup_distance <= tol && rep.base_group_dependence <= 1e-12;
    return rep;
}

} // namespace symred::models

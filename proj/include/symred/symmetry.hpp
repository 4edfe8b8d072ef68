#pragma once

// Group actions, numerical invariance verification of Stratonovich
// operators, reduction to quotient charts, and degeneracy/isotropy tests.

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "symred/integrate.hpp"
#include "symred/lie.hpp"
#include "symred/systems.hpp"

namespace symred {

/// An action on vector-space states. Group elements are carried as
/// parameter vectors; apply/tangent/generator close over the
/// representation.
struct GroupAction {
    std::function<VectorX(const VectorX& g, const VectorX& z)> apply;
    std::function<VectorX(const VectorX& g, const VectorX& z, const VectorX& v)> tangent;
    std::function<VectorX(const VectorX& xi, const VectorX& z)> generator;
    std::function<VectorX(std::mt19937_64&)> sample_group;
    std::function<VectorX(std::mt19937_64&)> sample_state;
};

struct QuotientChart {
    std::function<VectorX(const VectorX& z)> project;
    std::function<VectorX(const VectorX& q)> lift_section;
    std::function<VectorX(const VectorX& z, const VectorX& v)> tangent_project;
};

struct InvarianceReport {
    double max_defect = 0.0;
    bool pass = false;
    VectorX worst_group;
    VectorX worst_state;
    int worst_component = -1;

    std::string to_text() const {
        std::ostringstream os;
        os << "max_defect: " << max_defect << "\n"
           << "pass: " << (pass ? "true" : "false") << "\n"
           << "worst_component: " << worst_component << "\n";
        return os.str();
    }
};

/// Samples (g, x, z) and measures the equivariance defect
/// |sigma_i(x, g.z) - T Phi_g(sigma_i(x, z))| componentwise.
inline InvarianceReport check_invariance(const VectorSystem& sys, const GroupAction& act,
                                         int samples, std::uint64_t seed,
                                         double tol = 1e-10) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    InvarianceReport rep;
    for (int s = 0; s < samples; ++s) {
        const VectorX g = act.sample_group(rng);
        const VectorX z = act.sample_state(rng);
        const VectorX gz = act.apply(g, z);
        // Noise positions are sampled too; shipped models ignore them.
        VectorX x(4);
        for (int j = 0; j < 4; ++j) x[j] = gauss(rng);
        const MatrixX at_z = sys.fields(x, z);
        const MatrixX at_gz = sys.fields(x, gz);
        for (int i = 0; i < at_z.cols(); ++i) {
            const double defect =
                (at_gz.col(i) - act.tangent(g, z, at_z.col(i))).norm();
            if (defect > rep.max_defect) {
                rep.max_defect = defect;
                rep.worst_group = g;
                rep.worst_state = z;
                rep.worst_component = i;
            }
        }
    }
    rep.pass = rep.max_defect <= tol;
    return rep;
}

/// Invariance of a trivialized system on G x g* under lifted left
/// translation: in body coordinates the tangent map is the identity, so
/// the defect is the field's dependence on the group point.
inline InvarianceReport check_invariance(const ProductSystem& sys, int samples,
                                         std::uint64_t seed, double tol = 1e-10) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_rotation = [&] {
        return lie::exp_so3(AlgebraVector(gauss(rng), gauss(rng), gauss(rng)));
    };
    InvarianceReport rep;
    for (int s = 0; s < samples; ++s) {
        const Rotation g = random_rotation();
        const Rotation h = random_rotation();
        const CoalgebraVector mu(gauss(rng), gauss(rng), gauss(rng));
        VectorX x(4);
        for (int j = 0; j < 4; ++j) x[j] = gauss(rng);
        const auto [gv0, mv0] = sys.fields(x, g, mu);
        const auto [gv1, mv1] = sys.fields(x, Rotation(h * g), mu);
        const double defect =
            std::max((gv1 - gv0).norm(), (mv1 - mv0).norm());
        if (defect > rep.max_defect) rep.max_defect = defect;
    }
    rep.pass = rep.max_defect <= tol;
    return rep;
}

/// Reduced operator through an explicit chart:
/// sigma-bar_i(x, q) = T pi (sigma_i(x, lift(q))).
inline VectorSystem reduce_operator(const VectorSystem& sys, const GroupAction& act,
                                    const QuotientChart& chart, int reduced_dim,
                                    bool verify = false, std::uint64_t seed = 7) {
    if (verify) {
        const InvarianceReport rep = check_invariance(sys, act, 64, seed);
        if (!rep.pass)
            throw NotInvariant("reduce_operator: defect " + std::to_string(rep.max_defect));
    }
    VectorSystem reduced;
    reduced.state_dim = reduced_dim;
    reduced.fields = [sys, chart](const VectorX& x, const VectorX& q) {
        const VectorX z = chart.lift_section(q);
        const MatrixX f = sys.fields(x, z);
        MatrixX out(q.size(), f.cols());
        for (int i = 0; i < f.cols(); ++i) out.col(i) = chart.tangent_project(z, f.col(i));
        return out;
    };
    return reduced;
}

/// Poisson projection T*G -> g* in body coordinates: drop the group
/// factor, section mu -> (e, mu).
inline VectorSystem reduce_to_coalgebra(const ProductSystem& sys) {
    VectorSystem reduced;
    reduced.state_dim = 3;
    reduced.fields = [sys](const VectorX& x, const VectorX& q) {
        const auto [gv, mv] = sys.fields(x, Rotation::Identity(), q.head<3>());
        return MatrixX(mv);
    };
    return reduced;
}

struct DegeneracyReport {
    double sup_distance = 0.0;
    bool pass = false;
};

/// Prop.-2.2 check on G x g*: integrate from z0 and from g.z0 with the
/// same noise and compare Phi_g(Gamma) with Gamma'.
inline DegeneracyReport degeneracy_test(const ProductSystem& sys, const Rotation& g,
                                        const Rotation& g0, const CoalgebraVector& mu0,
                                        const NoisePath& noise, double tol = 1e-9,
                                        ProductScheme scheme = ProductScheme::Heun) {
    const ProductTrajectory a = integrate_product(sys, noise, g0, mu0, scheme);
    const ProductTrajectory b =
        integrate_product(sys, noise, Rotation(g * g0), mu0, scheme);
    DegeneracyReport rep;
    for (std::size_t k = 0; k < a.rotations.size(); ++k) {
        const double dg = (g * a.rotations[k] - b.rotations[k]).norm();
        const double dm =
            (a.momenta.row(static_cast<int>(k)) - b.momenta.row(static_cast<int>(k)))
                .norm();
        rep.sup_distance = std::max(rep.sup_distance, std::max(dg, dm));
    }
    rep.pass = rep.sup_distance <= tol;
    return rep;
}

/// Vector-state variant; the tolerance scales with the step size for
/// schemes that are only approximately equivariant.
inline DegeneracyReport degeneracy_test(const VectorSystem& sys, const GroupAction& act,
                                        const VectorX& g, const VectorX& z0,
                                        const NoisePath& noise, double tol) {
    const VectorTrajectory a = integrate_heun(sys, noise, z0);
    const VectorTrajectory b = integrate_heun(sys, noise, act.apply(g, z0));
    DegeneracyReport rep;
    for (int k = 0; k < a.times.size(); ++k) {
        const VectorX mapped = act.apply(g, a.states.row(k).transpose());
        rep.sup_distance =
            std::max(rep.sup_distance, (mapped - b.states.row(k).transpose()).norm());
    }
    rep.pass = rep.sup_distance <= tol;
    return rep;
}

struct IsotropyReport {
    double max_drift = 0.0;
    double min_state_norm = 0.0;
    bool pass = false;
};

/// Drift off an isotropy stratum along a trajectory, measured by a
/// caller-supplied distance-to-stratum function.
inline IsotropyReport isotropy_test(const VectorSystem& sys, const NoisePath& noise,
                                    const VectorX& z0,
                                    const std::function<double(const VectorX&)>& stratum_distance,
                                    double tol) {
    const VectorTrajectory traj = integrate_heun(sys, noise, z0);
    IsotropyReport rep;
    rep.min_state_norm = traj.states.row(0).norm();
    for (int k = 0; k < traj.times.size(); ++k) {
        const VectorX z = traj.states.row(k).transpose();
        rep.max_drift = std::max(rep.max_drift, stratum_distance(z));
        rep.min_state_norm = std::min(rep.min_state_norm, z.norm());
    }
    rep.pass = rep.max_drift <= tol;
    return rep;
}

/// Haar-ish SO(3) sampling flattened to a 9-vector, for GroupAction
/// instances whose group is the rotation group acting linearly.
inline GroupAction linear_rotation_action(int state_dim) {
    GroupAction act;
    act.apply = [](const VectorX& g, const VectorX& z) {
        const Eigen::Map<const Matrix3> m(g.data());
        return VectorX(m * z);
    };
    act.tangent = [](const VectorX& g, const VectorX&, const VectorX& v) {
        const Eigen::Map<const Matrix3> m(g.data());
        return VectorX(m * v);
    };
    act.generator = [](const VectorX& xi, const VectorX& z) {
        return VectorX(lie::hat(xi.head<3>()) * z);
    };
    act.sample_group = [](std::mt19937_64& rng) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const Rotation r = lie::exp_so3(AlgebraVector(gauss(rng), gauss(rng), gauss(rng)));
        VectorX g(9);
        Eigen::Map<Matrix3>(g.data()) = r;
        return g;
    };
    act.sample_state = [state_dim](std::mt19937_64& rng) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        VectorX z(state_dim);
        for (int j = 0; j < state_dim; ++j) z[j] = gauss(rng);
        return z;
    };
    return act;
}

/// Planar SO(2) rotations on R^2, parametrized by the angle.
inline GroupAction planar_rotation_action() {
    GroupAction act;
    auto rot = [](double a) {
        Eigen::Matrix2d r;
        r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        return r;
    };
    act.apply = [rot](const VectorX& g, const VectorX& z) { return VectorX(rot(g[0]) * z); };
    act.tangent = [rot](const VectorX& g, const VectorX&, const VectorX& v) {
        return VectorX(rot(g[0]) * v);
    };
    act.generator = [](const VectorX& xi, const VectorX& z) {
        return VectorX(xi[0] * Eigen::Vector2d(-z[1], z[0]));
    };
    act.sample_group = [](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
        VectorX g(1);
        g[0] = unif(rng);
        return g;
    };
    act.sample_state = [](std::mt19937_64& rng) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        VectorX z(2);
        z[0] = gauss(rng);
        z[1] = gauss(rng);
        return z;
    };
    return act;
}

} // namespace symred

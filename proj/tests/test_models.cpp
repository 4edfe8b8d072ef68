#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symred/models.hpp"
#include "symred/reconstruction.hpp"

using namespace symred;

TEST_CASE("model registry lists the shipped builders") {
    const auto names = models::model_names();
    CHECK(names.size() == 5);
    CHECK(names.front() == "rigid_impact");
    CHECK(names.back() == "skew_demo");
}

TEST_CASE("config validation rejects bad parameters") {
    models::ModelConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    models::ModelConfig bad_t = cfg;
    bad_t.T = 0.0;
    CHECK_THROWS_AS(bad_t.validate(), BadConfig);
    models::ModelConfig bad_steps = cfg;
    bad_steps.steps = 0;
    CHECK_THROWS_AS(bad_steps.validate(), BadConfig);
    models::ModelConfig asym = cfg;
    asym.lambda(0, 1) = 0.3;
    CHECK_THROWS_AS(asym.validate(), BadConfig);
    models::ModelConfig indefinite = cfg;
    indefinite.lambda = Vector3(1.0, -1.0, 1.0).asDiagonal();
    CHECK_THROWS_AS(indefinite.validate(), BadConfig);
    models::ModelConfig off_sphere = cfg;
    off_sphere.sphere_point = Vector3(0, 0, 2);
    CHECK_THROWS_AS(off_sphere.validate(), BadConfig);
}

TEST_CASE("rigid_impact with sigma = 0 is the deterministic Euler top") {
    models::ModelConfig cfg;
    cfg.sigma = 0.0;
    cfg.steps = 10000;
    const auto m = models::rigid_impact(cfg);
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, cfg.steps, 0);
    const VectorTrajectory traj = integrate_heun(m.reduced, noise, cfg.mu0);
    const Vector3 ref = oracles::euler_top(cfg.lambda, cfg.mu0, cfg.T);
    CHECK((traj.states.bottomRows(1).transpose() - ref).norm() <= 1e-6);
}

TEST_CASE("spherical body has an exactly zero drift field") {
    models::ModelConfig cfg;
    cfg.lambda = Matrix3(2.0 * Matrix3::Identity());
    const auto m = models::rigid_impact(cfg);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        const Vector3 mu(gauss(rng), gauss(rng), gauss(rng));
        CHECK(m.reduced.fields(VectorX::Zero(4), mu).col(0).norm() == 0.0);
    }
    // the momentum only rotates: its norm is preserved by the orbit scheme
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, 1000, 5);
    const VectorTrajectory traj = integrate_coadjoint(m.spec, noise, cfg.mu0);
    for (int k = 0; k < traj.times.size(); ++k)
        CHECK(traj.states.row(k).norm() ==
              doctest::Approx(cfg.mu0.norm()).epsilon(1e-13));
}

TEST_CASE("rigid_impact conserves spatial angular momentum under noise") {
    models::ModelConfig cfg;
    cfg.g0 = lie::exp_so3(Vector3(0.7, -0.1, 0.4));
    const auto m = models::rigid_impact(cfg);
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, cfg.steps, 77);
    ProductTrajectory traj =
        integrate_product(m.full, noise, cfg.g0, cfg.mu0, ProductScheme::Geometric);
    CHECK(noether_monitor(traj).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("loose_body with epsilon = 0 is deterministic") {
    models::ModelConfig cfg;
    cfg.epsilon = 0.0;
    cfg.steps = 10000;
    const auto m = models::loose_body(cfg);
    CHECK(m.noise_dim == 6);
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, cfg.steps, 2);
    const VectorTrajectory traj = integrate_heun(m.reduced, noise, cfg.mu0);
    const Vector3 ref = oracles::euler_top(cfg.lambda, cfg.mu0, cfg.T);
    CHECK((traj.states.bottomRows(1).transpose() - ref).norm() <= 1e-6);
}

TEST_CASE("loose_body fields are orthogonal to mu, so the Casimir holds") {
    models::ModelConfig cfg;
    const auto m = models::loose_body(cfg);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        const Vector3 mu(gauss(rng), gauss(rng), gauss(rng));
        const MatrixX f = m.reduced.fields(VectorX::Zero(7), mu);
        for (int i = 0; i < f.cols(); ++i)
            CHECK(std::abs(f.col(i).dot(mu)) <= 1e-14 * mu.squaredNorm());
    }
    const NoisePath noise = brownian_path(m.noise_dim, 10.0, 10000, 6);
    VectorTrajectory traj = integrate_coadjoint(m.spec, noise, cfg.mu0);
    CHECK(casimir_monitor(traj).cwiseAbs().maxCoeff() / cfg.mu0.squaredNorm() <=
          1e-12);
}

TEST_CASE("loose_body basis field e1 x e1 vanishes on mu = (0, 1, 1)") {
    // E mu = 0 for E = e1 (x) e1, so mu x (E mu) = 0
    models::ModelConfig cfg;
    const auto m = models::loose_body(cfg);
    const Vector3 mu(0, 1, 1);
    const MatrixX f = m.reduced.fields(VectorX::Zero(7), mu);
    CHECK(f.col(1).norm() == 0.0); // column order: drift, then e_i (x) e_i
}

TEST_CASE("collective reduction is seed-independent, the group motion is not") {
    models::ModelConfig cfg;
    cfg.steps = 500;
    const auto m = models::collective(cfg);
    const NoisePath n1 = brownian_path(m.noise_dim, cfg.T, cfg.steps, 100);
    const NoisePath n2 = brownian_path(m.noise_dim, cfg.T, cfg.steps, 200);
    const VectorTrajectory r1 = integrate_heun(m.reduced, n1, cfg.mu0);
    const VectorTrajectory r2 = integrate_heun(m.reduced, n2, cfg.mu0);
    CHECK((r1.states - r2.states).cwiseAbs().maxCoeff() == 0.0);

    const ProductTrajectory f1 =
        integrate_product(m.full, n1, cfg.g0, cfg.mu0, ProductScheme::Heun);
    const ProductTrajectory f2 =
        integrate_product(m.full, n2, cfg.g0, cfg.mu0, ProductScheme::Heun);
    CHECK((f1.momenta - f2.momenta).cwiseAbs().maxCoeff() == 0.0);
    double group_gap = 0.0;
    for (std::size_t k = 0; k < f1.rotations.size(); ++k)
        group_gap = std::max(group_gap, (f1.rotations[k] - f2.rotations[k]).norm());
    CHECK(group_gap > 1e-3);
}

TEST_CASE("collective phase drive carries the mu dY term") {
    models::ModelConfig cfg;
    cfg.sigma = 2.0;
    const auto m = models::collective(cfg);
    const int K = 8;
    const NoisePath noise = brownian_path(m.noise_dim, 1.0, K, 4);
    // constant reduced path: the drive is explicit
    VectorTrajectory red;
    red.times = noise.times;
    red.states = cfg.mu0.transpose().replicate(K + 1, 1);
    const PhaseDrive drive =
        phase_drive(m.spec, horizontal_lift(red, Rotation::Identity()), noise);
    for (int k = 0; k < K; ++k) {
        const Vector3 expected = cfg.lambda * cfg.mu0 * noise.increments(k, 0) +
                                 cfg.sigma * cfg.mu0 * noise.increments(k, 1);
        CHECK((drive.increments.col(k) - expected).norm() < 1e-15);
    }
}

TEST_CASE("sphere_bm stays on the sphere and freezes without noise") {
    models::ModelConfig cfg;
    const auto m = models::sphere_bm(cfg);
    NoisePath noise = brownian_path(3, cfg.T, 2000, 9);
    const GroupTrajectory traj = integrate_group(m.group, noise, Rotation::Identity());
    for (const Rotation& g : traj.states)
        CHECK(m.project(g).norm() == doctest::Approx(1.0).epsilon(1e-12));

    noise.increments.rightCols(3).setZero();
    const GroupTrajectory still = integrate_group(m.group, noise, Rotation::Identity());
    for (const Rotation& g : still.states)
        CHECK((m.project(g) - cfg.sphere_point).norm() == 0.0);
}

TEST_CASE("sphere_bm decay-rate calibration against the spectral oracle") {
    // Estimate d/dt log E[P1(<p_t, p_0>)] at small t by Monte Carlo and
    // compare with the Laplace-Beltrami eigenvalue rate l(l+1)/2 = 1.
    models::ModelConfig cfg;
    const auto m = models::sphere_bm(cfg);
    const double t = 0.1;
    const int steps = 50, paths = 20000;
    double mean = 0.0;
    for (int i = 0; i < paths; ++i) {
        const NoisePath noise = brownian_path(3, t, steps, 1000 + i);
        const GroupTrajectory traj =
            integrate_group(m.group, noise, Rotation::Identity());
        mean += m.project(traj.states.back()).dot(cfg.sphere_point) / paths;
    }
    const double rate = -std::log(mean) / t;
    CHECK(rate == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("Liao drift coincides with the group drift along solutions") {
    models::ModelConfig cfg;
    cfg.g0 = lie::exp_so3(Vector3(0.2, 0.5, -0.3));
    const auto m = models::rigid_impact(cfg);
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, cfg.steps, 21);
    ProductTrajectory traj =
        integrate_product(m.full, noise, cfg.g0, cfg.mu0, ProductScheme::Geometric);
    const Vector3 alpha = momentum(cfg.g0, cfg.mu0).jl;
    const double noether = noether_monitor(traj).cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.rotations.size(); ++k) {
        const Rotation& a = traj.rotations[k];
        const Vector3 mu = traj.momenta.row(static_cast<int>(k)).transpose();
        const Matrix3 liao = a * lie::hat(cfg.lambda * lie::Ad_star(a, alpha));
        const Matrix3 group = a * lie::hat(cfg.lambda * mu);
        worst = std::max(worst, (liao - group).norm());
    }
    CHECK(worst <= 1e-8 + 2.0 * cfg.lambda.norm() * noether);
}

TEST_CASE("skew_demo: zero Hamiltonian gives distance zero") {
    HamiltonianSpec spec;
    spec.h.push_back([](const CoalgebraVector&) { return 0.0; });
    spec.dh.push_back([](const CoalgebraVector&) { return AlgebraVector::Zero(); });
    spec.labels.push_back("zero");
    const NoisePath noise = brownian_path(0, 1.0, 100, 0);
    const models::ModelConfig cfg;
    const ProductTrajectory direct =
        integrate_product(full_system(spec), noise, cfg.g0, cfg.mu0,
                          ProductScheme::Heun);
    const VectorTrajectory base = integrate_heun(reduced_system(spec), noise, cfg.mu0);
    CHECK(strong_error(direct, reconstruct(spec, base, noise, cfg.g0)) == 0.0);
}

TEST_CASE("skew_demo factorization tracks the direct solve") {
    models::ModelConfig cfg;
    cfg.g0 = lie::exp_so3(Vector3(0.0, 0.8, 0.1));
    const auto rep = models::skew_demo(cfg);
    CHECK(rep.pass);
    CHECK(rep.sup_distance <= 1e-2);
    CHECK(rep.base_group_dependence <= 1e-12);
    CHECK(rep.to_text().find("pass: true") != std::string::npos);
}

TEST_CASE("skew_demo distance shrinks with order near 1 under refinement") {
    models::ModelConfig cfg;
    std::vector<std::pair<double, double>> errs;
    for (int steps : {100, 1000, 10000}) {
        double err = 0.0;
        const int paths = 8;
        for (int p = 0; p < paths; ++p) {
            models::ModelConfig c = cfg;
            c.steps = steps;
            c.seed = 400 + static_cast<std::uint64_t>(p);
            err += models::skew_demo(c).sup_distance / paths;
        }
        errs.emplace_back(cfg.T / steps, err);
    }
    CHECK(convergence_order(errs) >= 0.9);
}

TEST_CASE("three routes, one answer") {
    models::ModelConfig cfg;
    cfg.g0 = lie::exp_so3(Vector3(0.3, 0.0, 0.6));
    const auto m = models::rigid_impact(cfg);
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, cfg.steps, cfg.seed);
    const ProductTrajectory direct =
        integrate_product(m.full, noise, cfg.g0, cfg.mu0, ProductScheme::Heun);
    const ProductTrajectory via_orbit = reconstruct(
        m.spec, integrate_coadjoint(m.spec, noise, cfg.mu0), noise, cfg.g0);
    const ProductTrajectory via_heun =
        reconstruct(m.spec, integrate_heun(m.reduced, noise, cfg.mu0), noise, cfg.g0);
    CHECK(strong_error(direct, via_orbit) <= 1e-2);
    CHECK(strong_error(direct, via_heun) <= 1e-2);
    CHECK(strong_error(via_orbit, via_heun) <= 1e-2);
}

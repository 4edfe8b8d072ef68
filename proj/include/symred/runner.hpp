#pragma once

// Experiment modes behind the CLI: single paths, Monte Carlo ensembles,
// strong-convergence studies, and the invariant verification suite.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <atomic>
#include <thread>
#include <vector>

#include "symred/config.hpp"
#include "symred/csv.hpp"
#include "symred/hamiltonian.hpp"
#include "symred/integrate.hpp"
#include "symred/models.hpp"
#include "symred/reconstruction.hpp"
#include "symred/svg.hpp"
#include "symred/symmetry.hpp"

namespace symred {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int verification_failure = 3;
inline constexpr int divergence = 4;
} // namespace exit_code

namespace detail {

inline ProductTrajectory solve_full(const models::HamiltonianModel& m,
                                    const models::ModelConfig& cfg, std::uint64_t seed,
                                    int steps) {
    const NoisePath noise = brownian_path(m.noise_dim, cfg.T, steps, seed);
    ProductTrajectory traj =
        integrate_product(m.full, noise, cfg.g0, cfg.mu0, ProductScheme::Heun);
    noether_monitor(traj);
    casimir_monitor(traj);
    energy_monitor(traj, m.spec);
    momentum_monitors(traj);
    return traj;
}

inline Vector3 legendre12(const Vector3& p, const Vector3& p0, double& p1, double& p2) {
    const double c = p.dot(p0);
    p1 = c;
    p2 = 0.5 * (3.0 * c * c - 1.0);
    return p;
}

/// Run fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
inline void parallel_for(int n, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

inline int run_path_mode(const ExperimentConfig& cfg) {
    const auto& mc = cfg.model;
    const std::string out = cfg.out_dir + "/trajectory.csv";
    if (mc.name == "loose_body") {
        const auto m = models::loose_body(mc);
        const NoisePath noise = brownian_path(m.noise_dim, mc.T, mc.steps, mc.seed);
        VectorTrajectory traj = integrate_coadjoint(m.spec, noise, mc.mu0);
        casimir_monitor(traj);
        csv::write_trajectory(out, traj, {"mu_x", "mu_y", "mu_z"});
        if (cfg.emit_svg) {
            std::vector<svg::Series> series;
            for (int c = 0; c < 3; ++c)
                series.push_back({std::string("mu_") + "xyz"[c], traj.times,
                                  VectorX(traj.states.col(c))});
            svg::write_line_chart(cfg.out_dir + "/trajectory.svg", "loose_body", "t",
                                  "mu", series);
        }
        return exit_code::ok;
    }
    if (mc.name == "sphere_bm") {
        const auto m = models::sphere_bm(mc);
        const NoisePath noise = brownian_path(3, mc.T, mc.steps, mc.seed);
        const GroupTrajectory g = integrate_group(m.group, noise, mc.g0);
        VectorTrajectory traj;
        traj.times = g.times;
        traj.states.resize(g.times.size(), 3);
        for (std::size_t k = 0; k < g.states.size(); ++k)
            traj.states.row(static_cast<int>(k)) = m.project(g.states[k]).transpose();
        VectorX norm(traj.times.size());
        for (int k = 0; k < traj.times.size(); ++k) norm[k] = traj.states.row(k).norm();
        traj.monitors["radius"] = norm;
        csv::write_trajectory(out, traj, {"p_x", "p_y", "p_z"});
        if (cfg.emit_svg) {
            std::vector<svg::Series> series;
            for (int c = 0; c < 3; ++c)
                series.push_back({std::string("p_") + "xyz"[c], traj.times,
                                  VectorX(traj.states.col(c))});
            svg::write_line_chart(cfg.out_dir + "/trajectory.svg", "sphere_bm", "t", "p",
                                  series);
        }
        return exit_code::ok;
    }
    const auto m = mc.name == "collective" ? models::collective(mc)
                                           : models::rigid_impact(mc);
    const ProductTrajectory traj = detail::solve_full(m, mc, mc.seed, mc.steps);
    csv::write_trajectory(out, traj);
    if (cfg.emit_svg) {
        std::vector<svg::Series> series;
        for (int c = 0; c < 3; ++c)
            series.push_back({std::string("mu_") + "xyz"[c], traj.times,
                              VectorX(traj.momenta.col(c))});
        svg::write_line_chart(cfg.out_dir + "/trajectory.svg", mc.name, "t", "mu", series);
    }
    return exit_code::ok;
}

struct EnsembleRow {
    std::string observable;
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline std::vector<EnsembleRow> ensemble_summary(const std::vector<std::string>& names,
                                                 const MatrixX& samples) {
    std::vector<EnsembleRow> rows;
    const double n = static_cast<double>(samples.rows());
    for (int c = 0; c < samples.cols(); ++c) {
        EnsembleRow row;
        row.observable = names[c];
        row.mean = samples.col(c).mean();
        const double var =
            (samples.col(c).array() - row.mean).square().sum() / std::max(1.0, n - 1.0);
        row.stderr_ = std::sqrt(var / n);
        rows.push_back(row);
    }
    return rows;
}

inline int run_ensemble_mode(const ExperimentConfig& cfg) {
    const auto& mc = cfg.model;
    std::vector<std::string> names;
    MatrixX samples;
    if (mc.name == "sphere_bm") {
        const auto m = models::sphere_bm(mc);
        names = {"p1", "p2"};
        samples.resize(cfg.paths, 2);
        detail::parallel_for(cfg.paths, cfg.workers, [&](int i) {
            const NoisePath noise =
                brownian_path(3, mc.T, mc.steps, mc.seed ^ static_cast<std::uint64_t>(i));
            const GroupTrajectory g = integrate_group(m.group, noise, mc.g0);
            double p1, p2;
            detail::legendre12(m.project(g.states.back()), m.project(g.states.front()),
                               p1, p2);
            samples(i, 0) = p1;
            samples(i, 1) = p2;
        });
    } else if (mc.name == "loose_body") {
        const auto m = models::loose_body(mc);
        names = {"mu_x", "mu_y", "mu_z", "casimir_drift"};
        samples.resize(cfg.paths, 4);
        detail::parallel_for(cfg.paths, cfg.workers, [&](int i) {
            const NoisePath noise = brownian_path(m.noise_dim, mc.T, mc.steps,
                                                  mc.seed ^ static_cast<std::uint64_t>(i));
            VectorTrajectory traj = integrate_coadjoint(m.spec, noise, mc.mu0);
            const VectorX drift = casimir_monitor(traj);
            samples.row(i).head(3) = traj.states.bottomRows(1);
            samples(i, 3) = drift.cwiseAbs().maxCoeff();
        });
    } else {
        const auto m = mc.name == "collective" ? models::collective(mc)
                                               : models::rigid_impact(mc);
        names = {"mu_x", "mu_y", "mu_z", "energy", "noether_drift", "casimir_drift"};
        samples.resize(cfg.paths, 6);
        detail::parallel_for(cfg.paths, cfg.workers, [&](int i) {
            const ProductTrajectory traj = detail::solve_full(
                m, mc, mc.seed ^ static_cast<std::uint64_t>(i), mc.steps);
            samples.row(i).head(3) = traj.momenta.bottomRows(1);
            samples(i, 3) = traj.monitors.at("energy")[traj.times.size() - 1];
            samples(i, 4) = traj.monitors.at("noether").cwiseAbs().maxCoeff();
            samples(i, 5) = traj.monitors.at("casimir").cwiseAbs().maxCoeff();
        });
    }
    const auto rows = ensemble_summary(names, samples);
    std::ofstream os(cfg.out_dir + "/ensemble_summary.csv");
    os << "observable,mean,stderr,paths\n";
    for (const auto& r : rows)
        os << r.observable << "," << csv::format(r.mean) << "," << csv::format(r.stderr_)
           << "," << cfg.paths << "\n";
    return exit_code::ok;
}

/// Pathwise self-consistency study: direct full solve against the
/// reconstruction of the reduced solve, on nested grids of one noise
/// realization.
inline int run_convergence_mode(const ExperimentConfig& cfg) {
    const auto& mc = cfg.model;
    const auto m = mc.name == "collective" ? models::collective(mc)
                                           : models::rigid_impact(mc);
    std::vector<int> refinements = cfg.refinements;
    std::sort(refinements.begin(), refinements.end());
    const int finest = refinements.back();
    const NoisePath fine = brownian_path(m.noise_dim, mc.T, finest, mc.seed);
    std::vector<std::pair<double, double>> errs;
    for (int steps : refinements) {
        const NoisePath noise = coarsen(fine, finest / steps);
        const ProductTrajectory direct =
            integrate_product(m.full, noise, mc.g0, mc.mu0, ProductScheme::Heun);
        const VectorTrajectory reduced = integrate_heun(m.reduced, noise, mc.mu0);
        const ProductTrajectory rec = reconstruct(m.spec, reduced, noise, mc.g0);
        errs.emplace_back(mc.T / steps, strong_error(direct, rec));
    }
    const double order = convergence_order(errs);
    std::ofstream os(cfg.out_dir + "/convergence.csv");
    os << "dt,error,fitted_order\n";
    for (const auto& [dt, e] : errs)
        os << csv::format(dt) << "," << csv::format(e) << "," << csv::format(order)
           << "\n";
    if (cfg.emit_svg) {
        svg::Series s{"pathwise error", VectorX(errs.size()), VectorX(errs.size())};
        for (std::size_t i = 0; i < errs.size(); ++i) {
            s.x[static_cast<int>(i)] = errs[i].first;
            s.y[static_cast<int>(i)] = errs[i].second;
        }
        svg::write_line_chart(cfg.out_dir + "/convergence.svg",
                              mc.name + " strong convergence", "dt", "sup error", {s},
                              true);
    }
    return exit_code::ok;
}

struct VerifyLine {
    std::string name;
    bool pass = false;
    double defect = 0.0;
};

/// Invariant suite over all shipped models; tolerances match the
/// module contracts.
inline std::vector<VerifyLine> run_verification(const models::ModelConfig& base) {
    std::vector<VerifyLine> lines;
    auto add = [&](const std::string& name, bool pass, double defect) {
        lines.push_back({name, pass, defect});
    };

    models::ModelConfig mc = base;
    const auto rigid = models::rigid_impact(mc);
    const auto loose = models::loose_body(mc);
    const auto coll = models::collective(mc);

    const std::vector<std::pair<std::string, const models::HamiltonianModel*>> shipped = {
        {"rigid_impact", &rigid}, {"loose_body", &loose}, {"collective", &coll}};

    // Invariance of every shipped operator, and discrimination against
    // the planted counterexample.
    for (const auto& [name, model] : shipped) {
        const auto rep = check_invariance(model->full, 256, mc.seed);
        add(name + ".invariance", rep.pass, rep.max_defect);
    }
    {
        const auto rep = check_invariance(models::planted_counterexample(),
                                          planar_rotation_action(), 256, mc.seed);
        add("counterexample.detected", !rep.pass && rep.max_defect > 0.1, rep.max_defect);
    }

    // Functional-derivative consistency.
    for (const auto& [name, model] : shipped) {
        const double defect = verify_derivatives(model->spec, 64, mc.seed);
        add(name + ".derivatives", defect <= 1e-6, defect);
    }

    // Casimir conservation with the orbit-preserving reduced scheme.
    for (const auto& [name, model] : shipped) {
        if (name == "collective") continue;
        const NoisePath noise = brownian_path(model->noise_dim, mc.T, mc.steps, mc.seed);
        VectorTrajectory traj = integrate_coadjoint(model->spec, noise, mc.mu0);
        const double drift = casimir_monitor(traj).cwiseAbs().maxCoeff() /
                             mc.mu0.squaredNorm();
        add(name + ".casimir", drift <= 1e-12, drift);
    }

    // Degeneracy: equivariance of the group integrator.
    {
        const NoisePath noise = brownian_path(rigid.noise_dim, mc.T, mc.steps, mc.seed);
        const Rotation g = lie::exp_so3(AlgebraVector(0.3, -0.7, 1.1));
        const auto rep = degeneracy_test(rigid.full, g, mc.g0, mc.mu0, noise, 1e-9);
        add("rigid_impact.degeneracy", rep.pass, rep.sup_distance);
    }

    // Collective determinism: the reduced solve cannot see the seed.
    {
        const NoisePath na = brownian_path(coll.noise_dim, mc.T, mc.steps, mc.seed);
        const NoisePath nb = brownian_path(coll.noise_dim, mc.T, mc.steps, mc.seed + 1);
        const VectorTrajectory ra = integrate_heun(coll.reduced, na, mc.mu0);
        const VectorTrajectory rb = integrate_heun(coll.reduced, nb, mc.mu0);
        const double diff = (ra.states - rb.states).cwiseAbs().maxCoeff();
        add("collective.reduced_deterministic", diff == 0.0, diff);
    }

    // Skew-product factorization against the direct solve.
    {
        const auto rep = models::skew_demo(mc);
        add("skew_demo.factorization", rep.pass, rep.sup_distance);
    }

    // Noether drift at the configured resolution.
    {
        ProductTrajectory traj = detail::solve_full(rigid, mc, mc.seed, mc.steps);
        const double drift = traj.monitors.at("noether").cwiseAbs().maxCoeff();
        add("rigid_impact.noether", drift <= 1e-2, drift);
    }
    return lines;
}

inline int run_verify_mode(const ExperimentConfig& cfg) {
    const auto lines = run_verification(cfg.model);
    std::ofstream os(cfg.out_dir + "/verify_report.txt");
    bool all = true;
    for (const auto& l : lines) {
        os << l.name << ": " << (l.pass ? "pass" : "FAIL") << " (defect " << l.defect
           << ")\n";
        all = all && l.pass;
    }
    os << "overall: " << (all ? "pass" : "FAIL") << "\n";
    return all ? exit_code::ok : exit_code::verification_failure;
}

inline int run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    try {
        switch (cfg.mode) {
        case RunMode::Path: return run_path_mode(cfg);
        case RunMode::Ensemble: return run_ensemble_mode(cfg);
        case RunMode::Convergence: return run_convergence_mode(cfg);
        case RunMode::Verify: return run_verify_mode(cfg);
        }
    } catch (const Diverged& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return exit_code::divergence;
    }
    return exit_code::config_error;
}

} // namespace symred

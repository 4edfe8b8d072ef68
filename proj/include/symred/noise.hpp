#pragma once

// Discretized driving semimartingales: a time component plus Brownian
// components, with coarsening for strong-convergence studies on one
// fixed realization.

#include <cstdint>
#include <random>
#include <vector>

#include "symred/types.hpp"

namespace symred {

enum class ComponentKind { Time, Brownian, User };

struct NoisePath {
    VectorX times;                     // K+1 grid points, times[0] = 0
    MatrixX increments;                // K x dim, column 0 is dt
    std::vector<ComponentKind> labels; // size dim

    int steps() const { return static_cast<int>(increments.rows()); }
    int dim() const { return static_cast<int>(increments.cols()); }

    /// Cumulative noise position at grid index k.
    VectorX position(int k) const {
        VectorX x = VectorX::Zero(dim());
        for (int j = 0; j < k; ++j) x += increments.row(j).transpose();
        return x;
    }

    /// All positions, (K+1) x dim, row k = X_{t_k}.
    MatrixX positions() const {
        MatrixX x(steps() + 1, dim());
        x.row(0).setZero();
        for (int k = 0; k < steps(); ++k) x.row(k + 1) = x.row(k) + increments.row(k);
        return x;
    }
};

/// Component 0 carries dt exactly; components 1..dim are independent
/// N(0, dt) increments. Deterministic in the seed.
inline NoisePath brownian_path(int dim, double T, int K, std::uint64_t seed) {
    if (K < 1 || !(T > 0.0))
        throw InvalidGrid("brownian_path: need K >= 1 and T > 0");
    NoisePath p;
    const double dt = T / K;
    p.times = VectorX::LinSpaced(K + 1, 0.0, T);
    p.increments.resize(K, dim + 1);
    p.labels.assign(static_cast<std::size_t>(dim) + 1, ComponentKind::Brownian);
    p.labels[0] = ComponentKind::Time;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
    for (int k = 0; k < K; ++k) {
        p.increments(k, 0) = p.times[k + 1] - p.times[k];
        for (int i = 1; i <= dim; ++i) p.increments(k, i) = gauss(rng);
    }
    return p;
}

/// Sum consecutive fine increments into blocks of `factor`. Endpoint
/// values are preserved exactly (telescoping).
inline NoisePath coarsen(const NoisePath& p, int factor) {
    if (factor < 1 || p.steps() % factor != 0)
        throw NotDivisible("coarsen: factor must divide the step count");
    if (factor == 1) return p;
    const int K = p.steps() / factor;
    NoisePath q;
    q.labels = p.labels;
    q.times.resize(K + 1);
    q.increments = MatrixX::Zero(K, p.dim());
    q.times[0] = p.times[0];
    for (int k = 0; k < K; ++k) {
        q.times[k + 1] = p.times[(k + 1) * factor];
        for (int j = 0; j < factor; ++j)
            q.increments.row(k) += p.increments.row(k * factor + j);
        if (!q.labels.empty() && q.labels[0] == ComponentKind::Time)
            q.increments(k, 0) = q.times[k + 1] - q.times[k]; // keep dt exact
    }
    return q;
}

} // namespace symred

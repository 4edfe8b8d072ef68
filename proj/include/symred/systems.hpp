#pragma once

// Stratonovich operators presented as one field per noise component,
// for vector-space, group-valued, and trivialized G x g* states.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "symred/types.hpp"

namespace symred {

/// Fields on a vector space: (noise position x, state z) -> n x dim
/// matrix whose column i is sigma_i(x, z).
struct VectorSystem {
    int state_dim = 0;
    std::function<MatrixX(const VectorX& x, const VectorX& z)> fields;
};

/// Fields on SO(3), trivialized: column i is the algebra vector v_i(x, g).
/// Left-trivialized by default (update g exp(w)); right_invariant flips
/// the update to exp(w) g.
struct GroupSystem {
    bool right_invariant = false;
    std::function<Matrix3X(const VectorX& x, const Rotation& g)> fields;
};

/// Fields on G x g* in body coordinates. Per noise component i: a
/// left-trivialized algebra vector for the group factor and a tangent
/// vector for the momentum factor.
struct ProductSystem {
    std::function<std::pair<Matrix3X, Matrix3X>(const VectorX& x, const Rotation& g,
                                                const CoalgebraVector& mu)>
        fields;
};

using MonitorMap = std::map<std::string, VectorX>;

struct VectorTrajectory {
    VectorX times;
    MatrixX states; // (K+1) x n, row k = state at t_k
    MonitorMap monitors;
};

struct GroupTrajectory {
    VectorX times;
    std::vector<Rotation> states;
    MonitorMap monitors;
};

struct ProductTrajectory {
    VectorX times;
    std::vector<Rotation> rotations;
    MatrixX momenta; // (K+1) x 3
    MonitorMap monitors;
};

} // namespace symred

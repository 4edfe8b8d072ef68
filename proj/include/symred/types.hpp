#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace symred {

using Scalar = double;

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;
using Matrix3X = Eigen::Matrix3Xd;

// so(3) and so(3)* are identified with R^3 through the Euclidean pairing.
using AlgebraVector = Vector3;
using CoalgebraVector = Vector3;
using Rotation = Matrix3;

// Inverse inertia tensor, symmetric positive definite.
using InertiaMap = Matrix3;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotSkew : Error {
    explicit NotSkew(const std::string& msg) : Error(msg) {}
};
struct Degenerate : Error {
    explicit Degenerate(const std::string& msg) : Error(msg) {}
};
struct Diverged : Error {
    explicit Diverged(const std::string& msg) : Error(msg) {}
};
struct InvalidGrid : Error {
    explicit InvalidGrid(const std::string& msg) : Error(msg) {}
};
struct NotDivisible : Error {
    explicit NotDivisible(const std::string& msg) : Error(msg) {}
};
struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};
struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};
struct NotInvariant : Error {
    explicit NotInvariant(const std::string& msg) : Error(msg) {}
};
struct BadConfig : Error {
    explicit BadConfig(const std::string& msg) : Error(msg) {}
};

} // namespace symred

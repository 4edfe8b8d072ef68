#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symred/lie.hpp"

using namespace symred;
using lie::Ad_star;
using lie::ad_star;
using lie::exp_so3;
using lie::hat;
using lie::reorthonormalize;
using lie::vee;

namespace {

std::mt19937_64 rng(12345);

Vector3 random_vec() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    return Vector3(gauss(rng), gauss(rng), gauss(rng));
}

Rotation random_rotation() { return exp_so3(random_vec()); }

} // namespace

TEST_CASE("hat reproduces the cross product") {
    CHECK((hat(Vector3::UnitZ()) * Vector3::UnitX() - Vector3::UnitY()).norm() == 0.0);
    CHECK(hat(Vector3::Zero()).norm() == 0.0);
    const Vector3 v(1, 2, 3);
    CHECK((hat(v) * v).norm() == 0.0);
    for (int i = 0; i < 50; ++i) {
        const Vector3 a = random_vec(), b = random_vec();
        CHECK((hat(a) * b - a.cross(b)).norm() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK((hat(a) + hat(a).transpose()).norm() == 0.0);
    }
}

TEST_CASE("vee inverts hat") {
    const Vector3 v(1, 2, 3);
    CHECK((vee(hat(v)) - v).norm() == 0.0);
    CHECK(vee(Matrix3::Zero()).norm() == 0.0);
    CHECK((vee(hat(Vector3::UnitX()) + hat(Vector3::UnitY())) - Vector3(1, 1, 0)).norm() ==
          0.0);
    CHECK_THROWS_AS(vee(Matrix3::Identity()), NotSkew);
}

TEST_CASE("exp_so3 matches Rodrigues values") {
    CHECK((exp_so3(Vector3::Zero()) - Matrix3::Identity()).norm() == 0.0);
    // quarter turn about e3 maps e1 to e2
    const Rotation r = exp_so3(Vector3(0, 0, M_PI / 2));
    CHECK((r * Vector3::UnitX() - Vector3::UnitY()).norm() < 1e-12);
    // full turn is the identity
    CHECK((exp_so3(2 * M_PI * Vector3::UnitX()) - Matrix3::Identity()).norm() < 1e-10);
    // axis is fixed
    for (int i = 0; i < 20; ++i) {
        const Vector3 v = random_vec();
        CHECK((exp_so3(v) * v - v).norm() < 1e-13 * std::max(1.0, v.norm()));
        CHECK(lie::is_rotation(exp_so3(v)));
    }
}

TEST_CASE("exp_so3 small-angle branch is smooth") {
    for (double t : {1e-3, 1e-5, 1e-7, 1e-9, 0.0}) {
        const Rotation r = exp_so3(Vector3(t, 0, 0));
        CHECK(lie::is_rotation(r, 1e-14));
        CHECK(r(1, 2) == doctest::Approx(-std::sin(t)).epsilon(1e-12));
    }
}

TEST_CASE("one-parameter subgroup property for parallel arguments") {
    for (int i = 0; i < 20; ++i) {
        const Vector3 v = random_vec();
        const double a = 0.7, b = -1.3;
        CHECK((exp_so3((a + b) * v) - exp_so3(a * v) * exp_so3(b * v)).norm() < 1e-12);
    }
}

TEST_CASE("ad_star is mu x xi and is orthogonal to mu") {
    CHECK((ad_star(Vector3::UnitX(), Vector3::UnitY()) + Vector3::UnitZ()).norm() == 0.0);
    const Vector3 xi(0.4, -1.1, 2.0);
    CHECK(ad_star(xi, xi).norm() == 0.0);
    const Matrix3 lambda = Vector3(1, 2, 3).asDiagonal();
    const Vector3 mu(1, 1, 0);
    CHECK((ad_star(Vector3(lambda * mu), mu) - Vector3(0, 0, 1)).norm() == 0.0);
    for (int i = 0; i < 50; ++i) {
        const Vector3 a = random_vec(), m = random_vec();
        CHECK(std::abs(ad_star(a, m).dot(m)) <= 1e-15 * a.norm() * m.squaredNorm());
    }
}

TEST_CASE("Ad_star convention and composition") {
    const Vector3 mu(0.3, -0.2, 0.9);
    CHECK((Ad_star(Rotation::Identity(), mu) - mu).norm() == 0.0);
    CHECK((Ad_star(exp_so3(Vector3(0, 0, M_PI / 2)), Vector3::UnitX()) +
           Vector3::UnitY())
              .norm() < 1e-15);
    for (int i = 0; i < 30; ++i) {
        const Rotation g = random_rotation(), h = random_rotation();
        const Vector3 m = random_vec();
        CHECK(Ad_star(g, m).norm() == doctest::Approx(m.norm()).epsilon(1e-13));
        // contravariant: Ad*_{gh} = Ad*_h o Ad*_g
        CHECK((Ad_star(Rotation(g * h), m) - Ad_star(h, Ad_star(g, m))).norm() < 1e-12);
    }
}

TEST_CASE("Ad_star satisfies the defining pairing") {
    for (int i = 0; i < 30; ++i) {
        const Rotation g = random_rotation();
        const Vector3 mu = random_vec(), xi = random_vec();
        CHECK(Ad_star(g, mu).dot(xi) == doctest::Approx(mu.dot(g * xi)).epsilon(1e-12));
    }
}

TEST_CASE("reorthonormalize is the polar projection") {
    CHECK((reorthonormalize(Matrix3::Identity()) - Matrix3::Identity()).norm() == 0.0);
    for (int i = 0; i < 20; ++i) {
        const Rotation r = random_rotation();
        CHECK((reorthonormalize(Matrix3(1.001 * r)) - r).norm() < 1e-12);
        const Matrix3 noisy = r + 1e-6 * Matrix3::Random();
        const Rotation repaired = reorthonormalize(noisy);
        CHECK(lie::orthogonality_defect(repaired) <= 1e-14);
        // nearest rotation per the independent Newton polar oracle
        CHECK((repaired - oracles::polar_factor(noisy)).norm() < 1e-12);
        // idempotent
        CHECK((reorthonormalize(repaired) - repaired).norm() < 1e-14);
    }
    CHECK_THROWS_AS(reorthonormalize(Matrix3::Zero()), Degenerate);
    Matrix3 reflected = Matrix3::Identity();
    reflected(2, 2) = -1.0;
    CHECK_THROWS_AS(reorthonormalize(reflected), Degenerate);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rqk/kinematics.hpp"

using namespace rqk;

namespace {
std::mt19937 rng(12345);

Vec3 random_unit() {
    std::normal_distribution<double> n;
    Vec3 v(n(rng), n(rng), n(rng));
    return v.normalized();
}

Velocity3 random_velocity(double max_speed) {
    std::uniform_real_distribution<double> u(0.0, max_speed);
    return Velocity3(u(rng) * random_unit());
}

double so3_deviation(const Mat3& r) {
    return std::max((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff(),
                    std::abs(r.determinant() - 1.0));
}
}  // namespace

TEST_CASE("four-vector Minkowski algebra") {
    const FourVector a(2.0, 1.0, -1.0, 0.5);
    const FourVector b(1.0, 0.5, 2.0, -1.0);
    CHECK(a.dot(b) == doctest::Approx(2.0 * 1.0 - (0.5 - 2.0 - 0.5)).epsilon(1e-15));
    CHECK(a.minkowski_square() == doctest::Approx(4.0 - 2.25).epsilon(1e-15));
}

TEST_CASE("velocity validation and gamma") {
    CHECK_THROWS(Velocity3(1.0, 0.0, 0.0));
    CHECK_THROWS(Velocity3(0.8, 0.8, 0.0));
    const Velocity3 v(0.6, 0.0, 0.0);
    CHECK(v.gamma() == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(std::tanh(v.rapidity()) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("pure boost on a rest-frame vector") {
    const LorentzMatrix L = pure_boost(Velocity3(0.6, 0.0, 0.0));
    const FourVector out = L.apply(FourVector(1.0, 0.0, 0.0, 0.0));
    CHECK(out.t == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(out.r.x() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(out.r.y() == 0.0);
    CHECK(out.r.z() == 0.0);
}

TEST_CASE("Lorentz matrices preserve the metric and compose") {
    for (int i = 0; i < 50; ++i) {
        const LorentzMatrix L = pure_boost(random_velocity(0.99));
        const FourVector a(1.0, random_unit());
        const FourVector b(2.0, 0.7 * random_unit());
        CHECK(L.apply(a).dot(L.apply(b)) == doctest::Approx(a.dot(b)).epsilon(1e-11));
        const Mat4 prod = (L * L.inverse()).entries();
        CHECK((prod - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("Lorentz constructor rejects non-Lorentz input") {
    Mat4 bad = Mat4::Identity();
    bad(1, 1) = 2.0;
    CHECK_THROWS(LorentzMatrix(bad));
}

TEST_CASE("standard boost maps the rest momentum onto the shell") {
    const MassShellMomentum p(2.0, Vec3(1.0, -3.0, 0.5));
    const FourVector out = standard_boost(p).apply(FourVector(p.m0, Vec3::Zero()));
    CHECK(out.t == doctest::Approx(p.omega()).epsilon(1e-13));
    CHECK((out.r - p.p).norm() < 1e-12);
}

TEST_CASE("rotation embedding is a Lorentz transformation with identity time row") {
    const RotationMatrix R = RotationMatrix::axis_angle(Vec3(0, 0, 1), 0.3);
    const LorentzMatrix L = R.as_lorentz();
    CHECK(L(0, 0) == 1.0);
    const FourVector out = L.apply(FourVector(5.0, 1.0, 0.0, 0.0));
    CHECK(out.t == 5.0);
    CHECK(out.r.x() == doctest::Approx(std::cos(0.3)).epsilon(1e-15));
    CHECK(out.r.y() == doctest::Approx(std::sin(0.3)).epsilon(1e-15));
}

TEST_CASE("Wigner rotation: collinear boosts give the identity") {
    const Vec3 dir = Vec3(1.0, 2.0, -0.5).normalized();
    const MassShellMomentum p(1.0, 3.0 * dir);
    const LorentzMatrix L = pure_boost(Velocity3(0.7 * dir));
    const RotationMatrix W = wigner_rotation(L, p);
    CHECK((W.entries() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Wigner rotation of a rest-frame momentum is the identity") {
    const MassShellMomentum p(1.5, Vec3::Zero());
    const LorentzMatrix L = pure_boost(Velocity3(0.0, 0.9, 0.0));
    const RotationMatrix W = wigner_rotation(L, p);
    CHECK((W.entries() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Wigner rotation stays in SO(3) up to extreme rapidity") {
    for (double speed : {0.5, 0.9, 0.99, 0.999}) {
        for (int i = 0; i < 20; ++i) {
            const MassShellMomentum p(1.0, 1000.0 * random_unit());  // |p|/m0 = 1e3
            const LorentzMatrix L = pure_boost(Velocity3(speed * random_unit()));
            const RotationMatrix W = wigner_rotation(L, p);
            CHECK(so3_deviation(W.entries()) < 1e-10);
        }
    }
}

TEST_CASE("Wigner angle for perpendicular boosts matches the closed form") {
    // Particle moving along x, boost along y. The relative rotation angle of
    // the composed pure boosts satisfies
    //   tan(theta) = b1 b2 g1 g2 / (g1 + g2).
    const double b1 = 0.6, b2 = 0.8;
    const double g1 = 1.0 / std::sqrt(1.0 - b1 * b1);
    const double g2 = 1.0 / std::sqrt(1.0 - b2 * b2);
    const double m0 = 1.0;
    const MassShellMomentum p(m0, Vec3(g1 * b1 * m0, 0.0, 0.0));  // velocity b1 x
    const LorentzMatrix L = pure_boost(Velocity3(0.0, b2, 0.0));
    const RotationMatrix W = wigner_rotation(L, p);
    const double cos_theta = 0.5 * (W.entries().trace() - 1.0);
    const double theta_expected = std::atan(b1 * b2 * g1 * g2 / (g1 + g2));
    CHECK(std::acos(cos_theta) == doctest::Approx(theta_expected).epsilon(1e-10));
    // Rotation axis is z (perpendicular to both velocities).
    CHECK(std::abs(W.entries()(2, 2) - 1.0) < 1e-12);
}

TEST_CASE("velocity composition: parallel closed form and boost consistency") {
    const Velocity3 a(0.5, 0.0, 0.0);
    const Velocity3 b(0.3, 0.0, 0.0);
    CHECK(velocity_compose(a, b).beta().x() ==
          doctest::Approx((0.5 + 0.3) / (1.0 + 0.15)).epsilon(1e-14));

    for (int i = 0; i < 30; ++i) {
        const Velocity3 beta0 = random_velocity(0.95);
        const MassShellMomentum p(1.3, 2.0 * random_unit());
        const MassShellMomentum q = boost_momentum(pure_boost(beta0), p);
        const Vec3 expected = velocity_compose(Velocity3(p.beta()), beta0).beta();
        CHECK((q.beta() - expected).norm() < 1e-12);
    }
}

TEST_CASE("boost_momentum stays on the mass shell") {
    const MassShellMomentum p(0.7, Vec3(4.0, -2.0, 9.0));
    const MassShellMomentum q = boost_momentum(pure_boost(Velocity3(0.0, 0.0, 0.95)), p);
    CHECK(q.m0 == p.m0);
    const FourVector f = q.four_momentum();
    CHECK(f.minkowski_square() == doctest::Approx(p.m0 * p.m0).epsilon(1e-10));
}

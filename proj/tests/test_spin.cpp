#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rqk/spin.hpp"

using namespace rqk;
using namespace std::complex_literals;

namespace {
std::mt19937 rng(777);

RotationMatrix random_rotation() {
    std::normal_distribution<double> n;
    Vec3 axis(n(rng), n(rng), n(rng));
    std::uniform_real_distribution<double> u(0.0, M_PI);
    return RotationMatrix::axis_angle(axis.normalized(), u(rng));
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("spin bookkeeping") {
    const SpinValue s = SpinValue::of_two_s(3);  // s = 3/2
    CHECK(s.dim() == 4);
    CHECK(s.s() == doctest::Approx(1.5));
    CHECK(s.m_of(0) == doctest::Approx(1.5));
    CHECK(s.m_of(3) == doctest::Approx(-1.5));
    // (-1)^(s+m): s+m = 3, 2, 1, 0.
    CHECK(s.phase_s_plus_m(0) == -1);
    CHECK(s.phase_s_plus_m(1) == 1);
    CHECK(s.phase_s_plus_m(2) == -1);
    CHECK(s.phase_s_plus_m(3) == 1);
    CHECK_THROWS(SpinValue::of_two_s(-1));
}

TEST_CASE("SU(2) lift of simple rotations") {
    const SU2Matrix id = su2_from_rotation(RotationMatrix::identity());
    CHECK(max_abs(id - SU2Matrix::Identity()) < 1e-14);

    // z rotation by theta: diag(e^{-i theta/2}, e^{+i theta/2}).
    const double th = 0.8;
    const SU2Matrix uz = su2_from_rotation(RotationMatrix::axis_angle(Vec3(0, 0, 1), th));
    CHECK(std::abs(uz(0, 0) - std::exp(-0.5i * th)) < 1e-13);
    CHECK(std::abs(uz(1, 1) - std::exp(+0.5i * th)) < 1e-13);
    CHECK(std::abs(uz(0, 1)) < 1e-14);

    // y rotation: real matrix [[cos, -sin],[sin, cos]] of half angle.
    const SU2Matrix uy = su2_from_rotation(RotationMatrix::axis_angle(Vec3(0, 1, 0), th));
    CHECK(std::abs(uy(0, 0) - std::cos(0.5 * th)) < 1e-13);
    CHECK(std::abs(uy(0, 1) + std::sin(0.5 * th)) < 1e-13);
    CHECK(std::abs(uy(1, 0) - std::sin(0.5 * th)) < 1e-13);
}

TEST_CASE("SU(2) lift round trip, including angle-pi rotations") {
    for (int i = 0; i < 50; ++i) {
        const RotationMatrix r = random_rotation();
        const SU2Matrix u = su2_from_rotation(r);
        CHECK(max_abs(u * u.adjoint() - SU2Matrix::Identity()) < 1e-12);
        CHECK(std::abs(u.determinant() - 1.0) < 1e-12);
        const RotationMatrix back = rotation_from_su2(u);
        CHECK((back.entries() - r.entries()).cwiseAbs().maxCoeff() < 1e-11);
    }
    const RotationMatrix pi_rot = RotationMatrix::axis_angle(Vec3(0, 0, 1), M_PI);
    const RotationMatrix back = rotation_from_su2(su2_from_rotation(pi_rot));
    CHECK((back.entries() - pi_rot.entries()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spin-1/2 representation matrix is the SU(2) element itself") {
    for (int i = 0; i < 20; ++i) {
        const SU2Matrix u = su2_from_rotation(random_rotation());
        const WignerDMatrix d = wigner_d(SpinValue::of_two_s(1), u);
        CHECK(max_abs(d - u) < 1e-12);
    }
}

TEST_CASE("reduced rotation matrix closed forms") {
    const double b = 0.9;
    const WignerDMatrix dh = wigner_little_d(SpinValue::of_two_s(1), b);
    CHECK(std::abs(dh(0, 0) - std::cos(0.5 * b)) < 1e-14);
    CHECK(std::abs(dh(0, 1) + std::sin(0.5 * b)) < 1e-14);

    const WignerDMatrix d1 = wigner_little_d(SpinValue::of_two_s(2), b);
    CHECK(std::abs(d1(1, 1) - std::cos(b)) < 1e-13);  // middle element = cos(beta)
    CHECK(std::abs(d1(0, 0) - 0.5 * (1.0 + std::cos(b))) < 1e-13);
    CHECK(std::abs(d1(0, 1) + std::sin(b) / std::sqrt(2.0)) < 1e-13);
    CHECK(std::abs(d1(0, 2) - 0.5 * (1.0 - std::cos(b))) < 1e-13);

    // Highest-weight corner for general s: cos^(2s)(beta/2).
    const WignerDMatrix d3 = wigner_little_d(SpinValue::of_two_s(6), b);
    CHECK(std::abs(d3(0, 0) - std::pow(std::cos(0.5 * b), 6)) < 1e-13);
}

TEST_CASE("representation matrices are unitary and homomorphic up to s = 6") {
    for (int two_s : {0, 1, 2, 3, 4, 7, 12}) {
        const SpinValue s = SpinValue::of_two_s(two_s);
        for (int i = 0; i < 10; ++i) {
            const SU2Matrix u1 = su2_from_rotation(random_rotation());
            const SU2Matrix u2 = su2_from_rotation(random_rotation());
            const WignerDMatrix d1 = wigner_d(s, u1);
            const WignerDMatrix d2 = wigner_d(s, u2);
            const WignerDMatrix d12 = wigner_d(s, SU2Matrix(u1 * u2));
            CHECK(max_abs(d1 * d1.adjoint() -
                          WignerDMatrix::Identity(s.dim(), s.dim())) < 1e-10);
            CHECK(max_abs(d12 - d1 * d2) < 1e-10);
        }
    }
}

TEST_CASE("half-integer representations are double-valued over SO(3)") {
    // The lift of a 2pi rotation composed from two pi rotations is -I,
    // and D^(1/2)(-I) = -I while D^(1)(-I) = +I.
    const SU2Matrix u = su2_from_rotation(RotationMatrix::axis_angle(Vec3(0, 0, 1), M_PI));
    const SU2Matrix u2pi = u * u;
    CHECK(max_abs(u2pi + SU2Matrix::Identity()) < 1e-13);
    CHECK(max_abs(wigner_d(SpinValue::of_two_s(1), u2pi) +
                  WignerDMatrix::Identity(2, 2)) < 1e-12);
    CHECK(max_abs(wigner_d(SpinValue::of_two_s(2), u2pi) -
                  WignerDMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("representation of a z rotation is diagonal with e^{-i m theta}") {
    const double th = 1.1;
    const SU2Matrix uz = su2_from_rotation(RotationMatrix::axis_angle(Vec3(0, 0, 1), th));
    const SpinValue s = SpinValue::of_two_s(4);  // s = 2
    const WignerDMatrix d = wigner_d(s, uz);
    for (int i = 0; i < s.dim(); ++i) {
        for (int j = 0; j < s.dim(); ++j) {
            if (i == j)
                CHECK(std::abs(d(i, i) - std::exp(-1i * s.m_of(i) * th)) < 1e-12);
            else
                CHECK(std::abs(d(i, j)) < 1e-12);
        }
    }
}

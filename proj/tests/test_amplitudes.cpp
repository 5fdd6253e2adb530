#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "rqk/amplitudes.hpp"

using namespace rqk;
using namespace std::complex_literals;

namespace {
std::mt19937 rng(4242);

Eigen::VectorXcd ones(int n) { return Eigen::VectorXcd::Ones(n); }

Eigen::VectorXcd random_weights(int n) {
    std::normal_distribution<double> d;
    Eigen::VectorXcd w(n);
    for (int i = 0; i < n; ++i) w(i) = cplx(d(rng), d(rng));
    return w;
}

const ParticleSpec scalar_particle(1.0, SpinValue::of_two_s(0), 1);
}  // namespace

TEST_CASE("particle spec validation") {
    CHECK_THROWS(ParticleSpec(0.0, SpinValue::of_two_s(0), 1));
    CHECK_THROWS(ParticleSpec(-1.0, SpinValue::of_two_s(0), 1));
    CHECK_THROWS(ParticleSpec(1.0, SpinValue::of_two_s(0), 2));
}

TEST_CASE("Gaussian factory: pointwise values and unit norm") {
    const Vec3 pbar(0.5, -0.2, 0.1);
    const Vec3 xbar(1.0, 0.0, -2.0);
    const double sp = 0.3;
    const MomentumAmplitude psi =
        MomentumAmplitude::gaussian(scalar_particle, pbar, sp, xbar, ones(1));

    const Vec3 p(0.4, 0.1, 0.0);
    const cplx expected = std::pow(2.0 * M_PI * sp * sp, -0.75) *
                          std::exp(-(p - pbar).squaredNorm() / (4.0 * sp * sp)) *
                          std::exp(-1i * p.dot(xbar));
    CHECK(std::abs(psi.evaluate(p)(0) - expected) < 1e-14);
    CHECK(norm_squared(psi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_squared_covariant(psi) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Gaussian factory rejects bad input") {
    CHECK_THROWS(MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), -0.1,
                                             Vec3::Zero(), ones(1)));
    CHECK_THROWS(MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), 0.3,
                                             Vec3::Zero(), ones(2)));  // wrong spin dim
    CHECK_THROWS(MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), 0.3,
                                             Vec3::Zero(),
                                             Eigen::VectorXcd::Zero(1)));  // zero weights
}

TEST_CASE("scalar product of displaced Gaussians matches the closed form") {
    const double sp = 0.4;
    SUBCASE("momentum displacement") {
        const Vec3 d(0.3, -0.2, 0.5);
        const auto a = MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), sp,
                                                   Vec3::Zero(), ones(1));
        const auto b =
            MomentumAmplitude::gaussian(scalar_particle, d, sp, Vec3::Zero(), ones(1));
        const cplx sab = scalar_product(a, b);
        CHECK(std::abs(sab) ==
              doctest::Approx(std::exp(-d.squaredNorm() / (8.0 * sp * sp))).epsilon(1e-10));
        CHECK(std::abs(std::imag(sab)) < 1e-12);
    }
    SUBCASE("position displacement") {
        const Vec3 d(0.8, 0.1, -0.4);
        const auto a = MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), sp,
                                                   Vec3::Zero(), ones(1));
        const auto b =
            MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), sp, d, ones(1));
        CHECK(std::abs(scalar_product(a, b)) ==
              doctest::Approx(std::exp(-sp * sp * d.squaredNorm() / 2.0)).epsilon(1e-10));
    }
    SUBCASE("conjugate symmetry and orthogonal spin weights") {
        const ParticleSpec half(1.0, SpinValue::of_two_s(1), 1);
        Eigen::VectorXcd up(2), down(2);
        up << 1, 0;
        down << 0, 1;
        const auto a =
            MomentumAmplitude::gaussian(half, Vec3::Zero(), sp, Vec3::Zero(), up);
        const auto b =
            MomentumAmplitude::gaussian(half, Vec3(0.1, 0, 0), sp, Vec3::Zero(), down);
        CHECK(std::abs(scalar_product(a, b)) < 1e-12);
        const auto c =
            MomentumAmplitude::gaussian(half, Vec3(0.1, 0, 0), sp, Vec3(1, 2, 3),
                                        random_weights(2));
        CHECK(std::abs(scalar_product(a, c) - std::conj(scalar_product(c, a))) < 1e-12);
    }
}

TEST_CASE("four-momentum expectation of a Gaussian") {
    const Vec3 pbar(0.7, 0.0, -0.3);
    const double sp = 0.05;  // narrow: <omega> ~ omega(pbar) to O(sigma^2)
    const auto psi =
        MomentumAmplitude::gaussian(scalar_particle, pbar, sp, Vec3::Zero(), ones(1));
    const FourVector p4 = expectation_four_momentum(psi);
    CHECK((p4.r - pbar).norm() < 1e-10);  // exact by symmetry
    // <omega> = omega(pbar) + (sigma^2/2) tr d2w/dp2 + ...; the trace term is
    // sigma^2 (3 - |beta|^2) / (2 omega).
    const double om = scalar_particle.omega(pbar);
    const double corr =
        sp * sp * (3.0 - pbar.squaredNorm() / (om * om)) / (2.0 * om);
    CHECK(p4.t == doctest::Approx(om + corr).epsilon(1e-5));
    CHECK(p4.t >= scalar_particle.omega(pbar));  // convexity of omega
}

TEST_CASE("momentum and scalar densities") {
    const Vec3 pbar(0.2, 0.2, 0.0);
    const auto psi =
        MomentumAmplitude::gaussian(scalar_particle, pbar, 0.3, Vec3(1, 0, 0), ones(1));
    const MomentumDensity rho = momentum_density(psi);
    CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-12));
    const Vec3 p(0.1, 0.0, 0.3);
    CHECK(rho(p) == doctest::Approx(std::norm(psi.evaluate(p)(0))).epsilon(1e-14));
    CHECK(scalar_density(psi, p) ==
          doctest::Approx(scalar_particle.omega(p) * rho(p)).epsilon(1e-14));
}

TEST_CASE("grid sampling: norm, pointwise agreement, covariant norm") {
    const GridSpec spec{72, 9.0};
    const Vec3 pbar(0.4, -0.3, 0.2);
    const auto psi = MomentumAmplitude::gaussian_grid(scalar_particle, pbar, 1.0,
                                                      Vec3(0.5, 0, 0), ones(1), spec);
    CHECK(psi.is_grid());
    CHECK(norm_squared(psi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_squared_covariant(psi) == doctest::Approx(1.0).epsilon(1e-2));

    const auto exact = MomentumAmplitude::gaussian(scalar_particle, pbar, 1.0,
                                                   Vec3(0.5, 0, 0), ones(1));
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const Vec3 p(u(rng), u(rng), u(rng));
        CHECK(std::abs(psi.evaluate(p)(0) - exact.evaluate(p)(0)) < 2e-5);
    }
}

TEST_CASE("grid factory guards") {
    // Box too small for the tails.
    CHECK_THROWS(MomentumAmplitude::gaussian_grid(scalar_particle, Vec3(2, 0, 0), 1.0,
                                                  Vec3::Zero(), ones(1),
                                                  GridSpec{32, 4.0}));
    // Non-finite samples.
    GridSpec spec{8, 4.0};
    std::vector<GridData> comps(1, GridData::Zero(spec.size()));
    comps[0](10) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(MomentumAmplitude::from_grid(scalar_particle, spec, comps));
    // Mass on the boundary shell.
    comps[0].setZero();
    comps[0](spec.index(0, 3, 3)) = 1.0;
    CHECK_THROWS(MomentumAmplitude::from_grid(scalar_particle, spec, comps));
    // All zero.
    comps[0].setZero();
    CHECK_THROWS(MomentumAmplitude::from_grid(scalar_particle, spec, comps));
}

TEST_CASE("grid scalar product matches the analytic value") {
    const GridSpec spec{72, 9.0};
    const Vec3 d(0.4, 0.2, -0.1);
    const auto a = MomentumAmplitude::gaussian_grid(scalar_particle, Vec3::Zero(), 1.0,
                                                    Vec3::Zero(), ones(1), spec);
    const auto b = MomentumAmplitude::gaussian_grid(scalar_particle, d, 1.0, Vec3::Zero(),
                                                    ones(1), spec);
    CHECK(std::abs(scalar_product(a, b)) ==
          doctest::Approx(std::exp(-d.squaredNorm() / 8.0)).epsilon(1e-8));
}

TEST_CASE("mixed or mismatched scalar products are rejected") {
    const auto a = MomentumAmplitude::gaussian(scalar_particle, Vec3::Zero(), 0.3,
                                               Vec3::Zero(), ones(1));
    const auto b = MomentumAmplitude::gaussian_grid(scalar_particle, Vec3::Zero(), 1.0,
                                                    Vec3::Zero(), ones(1),
                                                    GridSpec{48, 9.0});
    CHECK_THROWS(scalar_product(a, b));
    const ParticleSpec other(2.0, SpinValue::of_two_s(0), 1);
    const auto c =
        MomentumAmplitude::gaussian(other, Vec3::Zero(), 0.3, Vec3::Zero(), ones(1));
    CHECK_THROWS(scalar_product(a, c));
}

TEST_CASE("covariant companion and scaling") {
    const auto psi = MomentumAmplitude::gaussian(scalar_particle, Vec3(0.3, 0, 0), 0.3,
                                                 Vec3::Zero(), ones(1));
    const CovariantAmplitude phi(psi);
    const Vec3 p(0.2, 0.4, -0.1);
    CHECK(std::abs(phi.evaluate(p)(0) -
                   std::sqrt(scalar_particle.omega(p)) * psi.evaluate(p)(0)) < 1e-14);

    const auto half = psi.scaled(0.5i);
    CHECK(std::abs(half.evaluate(p)(0) - 0.5i * psi.evaluate(p)(0)) < 1e-14);
    CHECK(norm_squared(half) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("grid serialization round trip") {
    const GridSpec spec{24, 8.0};
    const ParticleSpec half(1.5, SpinValue::of_two_s(1), -1);
    Eigen::VectorXcd w(2);
    w << 0.6, 0.8i;
    const auto psi =
        MomentumAmplitude::gaussian_grid(half, Vec3::Zero(), 1.0, Vec3(0.3, 0, 0), w, spec);

    std::stringstream buf;
    write_grid(buf, psi);
    const MomentumAmplitude back = read_grid(buf);
    CHECK(back.particle() == psi.particle());
    CHECK(back.grid().spec == spec);
    // complex64 storage: agreement at single precision.
    for (int m = 0; m < 2; ++m)
        CHECK((back.grid().comps[m] - psi.grid().comps[m]).cwiseAbs().maxCoeff() < 1e-6);

    std::stringstream junk("not a grid file");
    CHECK_THROWS(read_grid(junk));
}

#include "rqk/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace rqk {

namespace {
const Vec4 kMetricDiag(1.0, -1.0, -1.0, -1.0);

Mat4 metric() {
    Mat4 g = Mat4::Zero();
    g.diagonal() = kMetricDiag;
    return g;
}
}  // namespace

Velocity3::Velocity3(const Vec3& beta) : beta_(beta) {
    if (!(beta_.norm() < 1.0))
        throw std::domain_error("Velocity3: |beta| must be < 1, got " +
                                std::to_string(beta_.norm()));
}

double Velocity3::gamma() const { return 1.0 / std::sqrt(1.0 - beta_.squaredNorm()); }

double Velocity3::rapidity() const { return std::atanh(beta_.norm()); }

LorentzMatrix::LorentzMatrix(const Mat4& entries) : m_(entries) {
    const Mat4 g = metric();
    const double dev = (m_.transpose() * g * m_ - g).cwiseAbs().maxCoeff();
    // Rounding in L^T g L grows like eps * max|L|^2 at large gamma.
    const double mx = m_.cwiseAbs().maxCoeff();
    const double tol = std::max(1e-12, 64.0 * 2.2e-16 * mx * mx);
    if (dev > tol)
        throw std::invalid_argument("LorentzMatrix: metric not preserved, deviation " +
                                    std::to_string(dev));
    if (m_(0, 0) < 1.0 - 1e-12 || m_.determinant() < 0.0)
        throw std::invalid_argument("LorentzMatrix: not proper orthochronous");
}

LorentzMatrix LorentzMatrix::inverse() const {
    const Mat4 g = metric();
    return LorentzMatrix(g * m_.transpose() * g, unchecked_t{});
}

LorentzMatrix LorentzMatrix::operator*(const LorentzMatrix& o) const {
    return LorentzMatrix(m_ * o.m_, unchecked_t{});
}

RotationMatrix::RotationMatrix(const Mat3& entries, double tol) : r_(entries) {
    const double dev = (r_.transpose() * r_ - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw std::invalid_argument("RotationMatrix: not orthogonal, deviation " +
                                    std::to_string(dev));
    if (r_.determinant() < 0.0)
        throw std::invalid_argument("RotationMatrix: det < 0 (improper rotation)");
}

RotationMatrix RotationMatrix::axis_angle(const Vec3& axis, double angle) {
    return RotationMatrix(Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
}

LorentzMatrix RotationMatrix::as_lorentz() const {
    Mat4 m = Mat4::Identity();
    m.block<3, 3>(1, 1) = r_;
    return LorentzMatrix(m);
}

MassShellMomentum::MassShellMomentum(double mass, const Vec3& mom) : m0(mass), p(mom) {
    if (!(m0 > 0.0)) throw std::domain_error("MassShellMomentum: m0 must be > 0");
}

LorentzMatrix pure_boost(const Velocity3& beta0) {
    const Vec3 b = beta0.beta();
    const double b2 = b.squaredNorm();
    Mat4 m = Mat4::Identity();
    if (b2 > 0.0) {
        const double g0 = beta0.gamma();
        m(0, 0) = g0;
        for (int i = 0; i < 3; ++i) {
            m(0, i + 1) = m(i + 1, 0) = g0 * b(i);
            for (int j = 0; j < 3; ++j)
                m(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + (g0 - 1.0) * b(i) * b(j) / b2;
        }
    }
    return LorentzMatrix(m);
}

LorentzMatrix standard_boost(const MassShellMomentum& p) {
    return pure_boost(Velocity3(p.beta()));
}

MassShellMomentum boost_momentum(const LorentzMatrix& L, const MassShellMomentum& p) {
    return MassShellMomentum(p.m0, L.apply(p.four_momentum()).r);
}

RotationMatrix wigner_rotation(const LorentzMatrix& L, const MassShellMomentum& p,
                               double tol) {
    const MassShellMomentum lp = boost_momentum(L, p);
    const Mat4 a = standard_boost(lp).inverse().entries();
    const Mat4 b = L.entries();
    const Mat4 c = standard_boost(p).entries();

    // Long-double composition: intermediates reach O(gamma^2) and cancel down
    // to O(1), which costs ~7 digits in plain double at |p|/m0 ~ 1e3.
    using MatL = Eigen::Matrix<long double, 4, 4>;
    const MatL w = a.cast<long double>() * b.cast<long double>() * c.cast<long double>();

    double time_dev = std::abs((double)w(0, 0) - 1.0);
    for (int i = 1; i < 4; ++i) {
        time_dev = std::max(time_dev, std::abs((double)w(0, i)));
        time_dev = std::max(time_dev, std::abs((double)w(i, 0)));
    }
    // The factors are double-rounded, so the cancellation of O(gamma^2)
    // intermediates leaves a floor of ~eps * max|a| max|b| max|c| in the
    // composed time row regardless of the working precision.
    const double scale = a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff() *
                         c.cwiseAbs().maxCoeff();
    if (time_dev > std::max(tol, 64.0 * 2.2e-16 * scale))
        throw std::runtime_error(
            "wigner_rotation: composed matrix is not a pure rotation (deviation " +
            std::to_string(time_dev) + "); kinematics bug or tolerance too tight");

    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = (double)w(i + 1, j + 1);
    // One Newton orthogonalization step, R <- R (3I - R^T R)/2.
    r = r * (3.0 * Mat3::Identity() - r.transpose() * r) * 0.5;
    return RotationMatrix(r, 1e-10);
}

Velocity3 velocity_compose(const Velocity3& beta, const Velocity3& beta0) {
    const Vec3 b = beta.beta();
    const Vec3 b0 = beta0.beta();
    const double g0 = beta0.gamma();
    Vec3 b_par = Vec3::Zero();
    const double b02 = b0.squaredNorm();
    if (b02 > 0.0) b_par = b.dot(b0) / b02 * b0;
    const Vec3 b_perp = b - b_par;
    const Vec3 result = (b_perp + g0 * (b_par + b0)) / (g0 * (1.0 + b0.dot(b)));
    return Velocity3(result);
}

}  // namespace rqk

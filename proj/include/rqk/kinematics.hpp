#ifndef RQK_KINEMATICS_HPP
#define RQK_KINEMATICS_HPP

#include <Eigen/Dense>
#include <complex>

// Exact special-relativistic kinematics: four-vectors, pure and standard
// boosts, Wigner rotations, velocity composition. Metric (+,-,-,-), natural
// units, active transformation convention.

namespace rqk {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using cplx = std::complex<double>;

/// Spacetime or energy-momentum four-vector (t, x, y, z).
struct FourVector {
    double t = 0.0;
    Vec3 r = Vec3::Zero();

    FourVector() = default;
    FourVector(double t0, const Vec3& r0) : t(t0), r(r0) {}
    FourVector(double t0, double x, double y, double z) : t(t0), r(x, y, z) {}

    Vec4 as_vec4() const { return Vec4(t, r.x(), r.y(), r.z()); }
    static FourVector from_vec4(const Vec4& v) {
        return FourVector(v(0), Vec3(v(1), v(2), v(3)));
    }

    /// Minkowski dot product a.b = a0 b0 - a.b (metric +,-,-,-).
    double dot(const FourVector& o) const { return t * o.t - r.dot(o.r); }
    double minkowski_square() const { return dot(*this); }

    FourVector operator+(const FourVector& o) const { return {t + o.t, r + o.r}; }
    FourVector operator-(const FourVector& o) const { return {t - o.t, r - o.r}; }
    FourVector operator*(double c) const { return {c * t, c * r}; }
};

/// Three-velocity, |beta| < 1 enforced at construction.
class Velocity3 {
  public:
    explicit Velocity3(const Vec3& beta);
    Velocity3(double bx, double by, double bz) : Velocity3(Vec3(bx, by, bz)) {}

    const Vec3& beta() const { return beta_; }
    double speed() const { return beta_.norm(); }
    double gamma() const;
    /// Rapidity zeta = artanh |beta|.
    double rapidity() const;

  private:
    Vec3 beta_;
};

/// Proper orthochronous Lorentz matrix; metric preservation, det = +1 and
/// L^0_0 >= 1 are checked at construction. Inversions live in the poincare
/// module, not here.
class LorentzMatrix {
  public:
    explicit LorentzMatrix(const Mat4& entries);
    static LorentzMatrix identity() { return LorentzMatrix(Mat4::Identity()); }

    const Mat4& entries() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    FourVector apply(const FourVector& v) const {
        return FourVector::from_vec4(m_ * v.as_vec4());
    }
    /// Exact inverse g L^T g (no matrix inversion).
    LorentzMatrix inverse() const;
    LorentzMatrix operator*(const LorentzMatrix& o) const;

  private:
    struct unchecked_t {};
    LorentzMatrix(const Mat4& entries, unchecked_t) : m_(entries) {}
    Mat4 m_;
    friend LorentzMatrix pure_boost(const Velocity3&);
};

/// Proper rotation; R^T R = I and det = +1 checked at construction.
class RotationMatrix {
  public:
    explicit RotationMatrix(const Mat3& entries, double tol = 1e-12);
    static RotationMatrix identity() { return RotationMatrix(Mat3::Identity()); }
    static RotationMatrix axis_angle(const Vec3& axis, double angle);

    const Mat3& entries() const { return r_; }
    Vec3 apply(const Vec3& v) const { return r_ * v; }
    RotationMatrix inverse() const { return RotationMatrix(r_.transpose()); }
    RotationMatrix operator*(const RotationMatrix& o) const {
        return RotationMatrix(r_ * o.r_);
    }
    /// Embedding into the Lorentz group (identity time row/column).
    LorentzMatrix as_lorentz() const;

  private:
    Mat3 r_;
};

/// On-shell momentum: stores (m0, p), derives omega = +sqrt(p^2 + m0^2).
struct MassShellMomentum {
    double m0;
    Vec3 p;

    MassShellMomentum(double mass, const Vec3& mom);
    double omega() const { return std::sqrt(p.squaredNorm() + m0 * m0); }
    FourVector four_momentum() const { return FourVector(omega(), p); }
    /// Particle velocity beta = p / omega.
    Vec3 beta() const { return p / omega(); }
};

/// Symmetric pure boost Lambda(beta0), closed rank-1 form in gamma0, beta0.
LorentzMatrix pure_boost(const Velocity3& beta0);

/// Standard boost Lambda[p] = Lambda(p/omega): maps (m0, 0) to (omega, p).
LorentzMatrix standard_boost(const MassShellMomentum& p);

/// Wigner rotation W(Lambda p <- p) = Lambda^-1[Lambda p] Lambda Lambda[p].
/// The composed 4x4 must be a pure rotation; its time row/column is checked
/// against (1,0,0,0) to `tol` (throws std::runtime_error on failure, which
/// signals a kinematics bug). Composition runs in long double and the
/// extracted block gets one orthogonality polish step.
RotationMatrix wigner_rotation(const LorentzMatrix& L, const MassShellMomentum& p,
                               double tol = 1e-10);

/// Relativistic velocity composition: the velocity of a particle moving with
/// beta as seen after an active boost by beta0.
Velocity3 velocity_compose(const Velocity3& beta, const Velocity3& beta0);

/// Boost the spatial momentum p through L, staying on the m0 shell.
MassShellMomentum boost_momentum(const LorentzMatrix& L, const MassShellMomentum& p);

}  // namespace rqk

#endif

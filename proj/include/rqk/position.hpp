#ifndef RQK_POSITION_HPP
#define RQK_POSITION_HPP

#include <array>
#include <functional>
#include <memory>

#include "rqk/amplitudes.hpp"
#include "rqk/fourier.hpp"

// Position amplitudes (Fourier transforms of the momentum amplitudes), exact
// multiplier evolution, the position operator in its plain and boosted forms,
// and the average-event experiment.

namespace rqk {

/// A momentum-space field: the result of applying operators built from
/// momentum multipliers f(p) and x = i d/dp to an amplitude. Carries a value
/// (and, when available, a first derivative) at every p, plus either grid
/// samples or quadrature support for inner products.
class MomentumField {
  public:
    struct Jet {
        Eigen::VectorXcd v;  // 2s+1 values
        Eigen::MatrixXcd g;  // (2s+1) x 3 derivative d/dp; empty if unavailable
    };
    using Fn = std::function<Jet(const Vec3&, bool need_grad)>;

    static MomentumField from_amplitude(const MomentumAmplitude& psi);
    static MomentumField analytic(int dim, Fn fn, const Vec3& center, const Mat3& cov,
                                  int nodes);
    static MomentumField on_grid(const GridSpec& spec, std::vector<GridData> comps);

    int dim() const { return dim_; }
    bool is_grid() const { return !comps_.empty(); }
    const GridSpec& spec() const { return spec_; }
    const std::vector<GridData>& comps() const { return comps_; }

    Jet at(const Vec3& p, bool need_grad = false) const;

    /// integral d3p sum_m conj(this) other (flat measure).
    cplx dot(const MomentumField& other) const;
    double norm_squared() const { return std::real(dot(*this)); }

    /// Pointwise multiplication by a scalar function f(p); grad_f feeds the
    /// product rule and may be null when no derivative is ever requested.
    MomentumField multiplied(const std::function<double(const Vec3&)>& f,
                             const std::function<Vec3(const Vec3&)>& grad_f) const;
    /// x_a = i d/dp_a applied componentwise. The result has no derivative in
    /// analytic mode (would need second derivatives); grids stay closed.
    MomentumField xhat(int axis) const;

    MomentumField operator+(const MomentumField& o) const;
    MomentumField operator-(const MomentumField& o) const;
    MomentumField operator*(cplx c) const;

  private:
    MomentumField() = default;
    // Exact change of variables for fields descended from one chained
    // analytic amplitude: integrate over the base-Gaussian support in q and
    // evaluate at p = map(q) with the invariant-measure factor. Shared (by
    // pointer identity) across fields derived from the same amplitude, so
    // dot() can recognize a matched pair and avoid the linearized support.
    struct Pullback {
        Vec3 center;
        Mat3 cov;
        double m0;
        std::function<Vec3(const Vec3&)> map;
    };
    int dim_ = 0;
    Fn fn_;
    Vec3 center_ = Vec3::Zero();
    Mat3 cov_ = Mat3::Identity();
    int nodes_ = 32;
    std::shared_ptr<const Pullback> pull_;
    GridSpec spec_;
    std::vector<GridData> comps_;  // grid mode
};

/// psi_m(t, x) = (2 pi)^{-3/2} integral d3p Psi_m(p) e^{+i(p.x - w t)}.
/// Stored as the (grid-carried) momentum amplitude at t = 0 plus the time
/// label; position samples are regenerated after every operation.
class PositionAmplitude {
  public:
    PositionAmplitude(MomentumAmplitude psi, double t);

    const MomentumAmplitude& momentum() const { return psi_; }
    double t() const { return t_; }
    const GridSpec& position_spec() const { return xspec_; }
    const std::vector<GridData>& components() const { return xcomps_; }
    /// True when the momentum boundary-cell mass exceeded 1e-8 (aliasing).
    bool aliasing_flagged() const { return aliasing_; }

    /// integral d3x sum_m |psi_m|^2 (flat measure, Riemann sum).
    double norm_squared() const;
    /// integral d3x x sum_m |psi_m|^2.
    Vec3 position_expectation() const;

  private:
    MomentumAmplitude psi_;
    double t_;
    GridSpec xspec_;
    std::vector<GridData> xcomps_;
    bool aliasing_ = false;
};

PositionAmplitude to_position(const MomentumAmplitude& psi, double t);
PositionAmplitude evolve(const PositionAmplitude& psix, double dt);
/// Momentum samples including the e^{-i w t} evolution phase.
MomentumAmplitude to_momentum(const PositionAmplitude& psix);

/// x Psi = i dPsi/dp, one field per axis. Exact derivative for Gaussian
/// carriers, spectral for grids.
std::array<MomentumField, 3> position_operator_apply(const MomentumAmplitude& psi);

/// Both sides of the flat-vs-covariant matrix-element identity for the
/// position operator: lhs uses the covariant measure d3p/w and the form
/// i d/dp - i p / 2 w^2 on Phi = sqrt(w) Psi; rhs uses the flat measure and
/// i d/dp on Psi. They agree analytically.
struct NWCheckResult {
    Eigen::Vector3cd lhs;
    Eigen::Vector3cd rhs;
};
NWCheckResult nw_identity_check(const CovariantAmplitude& a, const CovariantAmplitude& b);

/// Nonlocal boost of a position amplitude: round trip through momentum space.
PositionAmplitude boost_position_amplitude(const PositionAmplitude& psix,
                                           const Velocity3& beta0);

/// Boosted position operator (spinless only), manifestly Hermitian
/// anticommutator form:
///   x' = x_perp - 1/2 {b_perp/(1 + b0.b), b0.x}
///            + 1/2 {1/(g0 (1 + b0.b)), x_par}.
/// Throws std::invalid_argument for s != 0.
std::array<MomentumField, 3> boosted_position_operator_apply(const MomentumAmplitude& psi,
                                                             const Velocity3& beta0);
/// Same operator applied to an intermediate field (for commutator checks).
MomentumField boosted_position_operator_apply(const MomentumField& f,
                                              const ParticleSpec& particle, int axis,
                                              const Velocity3& beta0);

/// The average-event experiment: x^mu = (t, <x(t)>) in the original frame,
/// x'^mu = (t', <x'(t')>) with t' = g0 (t + b0.<x(t)>), compared against the
/// pure boost of x^mu. Valid for momentum-narrow spinless Gaussians; refuses
/// (std::domain_error) when the fractional-remainder bound reaches 0.1.
struct AverageEventResult {
    FourVector x4;
    FourVector x4_primed;
    double epsilon_bound;  // bbar^2 (sigma_p/|pbar|)^2
    double deviation;      // ||x' - Lambda x|| / ||Lambda x||
};
AverageEventResult average_event(const MomentumAmplitude& psi, const Velocity3& beta0,
                                 double t);

/// Transformations of position amplitudes, routed through momentum space.
PositionAmplitude position_transforms(const PositionAmplitude& psix,
                                      const PoincareElement& g);

/// Relative spectral residual of the wave-equation operator
/// (d^mu d_mu + m0^2) on the position amplitude (zero up to rounding for
/// every positive-energy state).
double kg_residual(const PositionAmplitude& psix);

}  // namespace rqk

#endif

#ifndef RQK_AMPLITUDES_HPP
#define RQK_AMPLITUDES_HPP

#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "rqk/grid.hpp"
#include "rqk/poincare.hpp"
#include "rqk/spin.hpp"

// The momentum/spin probability amplitude Psi_m(p), its covariant companion
// Phi_m(p) = sqrt(omega) Psi_m(p), densities, norms and expectation values.
//
// Two carriers:
//  - analytic Gaussian: a base packet plus a lazily composed chain of
//    Poincare transformations (evaluated exactly point by point);
//  - sampled grid: uniform Cartesian cube, resampled once per transformation.

namespace rqk {

struct ParticleSpec {
    double m0;
    SpinValue s;
    int eta;  // intrinsic parity, +1 or -1

    ParticleSpec(double mass, SpinValue spin, int parity);
    double omega(const Vec3& p) const { return std::sqrt(p.squaredNorm() + m0 * m0); }
    bool operator==(const ParticleSpec& o) const {
        return m0 == o.m0 && s.two_s == o.s.two_s && eta == o.eta;
    }
};

struct GaussianData {
    Vec3 pbar;
    double sigma_p;
    Vec3 xbar;
    Eigen::VectorXcd weights;  // 2s+1, unit norm
};

struct AnalyticCarrier {
    GaussianData base;
    std::vector<PoincareElement> chain;  // applied in order, base first
    // Support tracking for quadrature placement.
    Vec3 center;
    Mat3 cov;
    double phase_scale;  // oscillation-length hint (position offsets seen so far)
};

struct GridCarrier {
    GridSpec spec;
    std::vector<GridData> comps;  // 2s+1 components
    double support_loss = 0.0;    // mass lost to box clipping in the last resample
};

class MomentumAmplitude {
  public:
    /// Eq.-3.39-style Gaussian packet; spin weights are normalized copies of
    /// `weights`. Unit norm by construction.
    static MomentumAmplitude gaussian(const ParticleSpec& particle, const Vec3& pbar,
                                      double sigma_p, const Vec3& xbar,
                                      const Eigen::VectorXcd& weights);

    /// Same packet sampled onto `spec` (normalized on the grid). Throws if
    /// the tail mass outside the box exceeds 1e-12.
    static MomentumAmplitude gaussian_grid(const ParticleSpec& particle, const Vec3& pbar,
                                           double sigma_p, const Vec3& xbar,
                                           const Eigen::VectorXcd& weights,
                                           const GridSpec& spec);

    /// Wrap externally supplied samples (normalizes; rejects non-finite data
    /// and boundary-shell mass above 1e-12).
    static MomentumAmplitude from_grid(const ParticleSpec& particle, const GridSpec& spec,
                                       std::vector<GridData> comps);

    const ParticleSpec& particle() const { return particle_; }
    int spin_dim() const { return particle_.s.dim(); }

    bool is_analytic() const { return std::holds_alternative<AnalyticCarrier>(carrier_); }
    bool is_grid() const { return std::holds_alternative<GridCarrier>(carrier_); }
    const AnalyticCarrier& analytic() const { return std::get<AnalyticCarrier>(carrier_); }
    const GridCarrier& grid() const { return std::get<GridCarrier>(carrier_); }

    /// Pointwise value (2s+1 components). Exact for analytic carriers,
    /// Lagrange-interpolated for grids.
    Eigen::VectorXcd evaluate(const Vec3& p) const;

    /// Gauss-Hermite node count used for analytic-carrier integrals.
    int quadrature_nodes() const;

    /// Sample an analytic carrier onto a grid (identity for grid carriers
    /// with matching spec).
    MomentumAmplitude to_grid(const GridSpec& spec) const;

    MomentumAmplitude with_carrier(AnalyticCarrier c) const;
    MomentumAmplitude with_carrier(GridCarrier c) const;
    MomentumAmplitude scaled(cplx factor) const;

  private:
    MomentumAmplitude(ParticleSpec particle, std::variant<AnalyticCarrier, GridCarrier> c)
        : particle_(particle), carrier_(std::move(c)) {}
    ParticleSpec particle_;
    std::variant<AnalyticCarrier, GridCarrier> carrier_;
};

/// Covariant companion Phi_m(p) = sqrt(omega) Psi_m(p). Not a probability
/// amplitude; its density S(p) transforms as a Lorentz scalar field.
class CovariantAmplitude {
  public:
    explicit CovariantAmplitude(MomentumAmplitude psi) : psi_(std::move(psi)) {}
    Eigen::VectorXcd evaluate(const Vec3& p) const {
        return std::sqrt(psi_.particle().omega(p)) * psi_.evaluate(p);
    }
    const MomentumAmplitude& to_momentum() const { return psi_; }

  private:
    MomentumAmplitude psi_;
};

/// integral d3p sum_m |Psi_m|^2 (flat measure).
double norm_squared(const MomentumAmplitude& psi);

/// Momentum-space image under the chain of transformations carried by an
/// analytic amplitude: the point where the chained amplitude inherits the
/// base-Gaussian value at q. d3p/omega is invariant under the chain, so
/// pulling an integral back through this map costs exactly omega(p)/omega(q).
Vec3 chain_forward_momentum(const ParticleSpec& pt,
                            const std::vector<PoincareElement>& chain, const Vec3& q);

/// integral (d3p/omega) sum_m |Phi_m|^2; equals norm_squared analytically.
double norm_squared_covariant(const MomentumAmplitude& psi);

/// integral d3p sum_m Psi^(1)*_m Psi^(2)_m. Throws on mismatched particles or
/// incompatible carriers.
cplx scalar_product(const MomentumAmplitude& a, const MomentumAmplitude& b);

/// integral d3p p^mu rho(p).
FourVector expectation_four_momentum(const MomentumAmplitude& psi);

/// rho(p) = sum_m |Psi_m(p)|^2, a normalized momentum probability density.
class MomentumDensity {
  public:
    explicit MomentumDensity(MomentumAmplitude psi) : psi_(std::move(psi)) {}
    double operator()(const Vec3& p) const { return psi_.evaluate(p).squaredNorm(); }
    double integral() const { return norm_squared(psi_); }

  private:
    MomentumAmplitude psi_;
};

MomentumDensity momentum_density(const MomentumAmplitude& psi);

/// S(p) = sum_m |Phi_m(p)|^2 = omega rho(p); transforms as a scalar field.
double scalar_density(const MomentumAmplitude& psi, const Vec3& p);

/// Binary grid serialization: header (magic "RQKG", version, n, pmax, two_s,
/// m0, eta; little-endian) followed by row-major complex64 samples (two
/// little-endian float32 per value, components in m = +s..-s order).
void write_grid(std::ostream& out, const MomentumAmplitude& psi);
MomentumAmplitude read_grid(std::istream& in);

}  // namespace rqk

#endif

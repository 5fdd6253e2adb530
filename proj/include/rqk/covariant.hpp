#ifndef RQK_COVARIANT_HPP
#define RQK_COVARIANT_HPP

#include <array>

#include "rqk/amplitudes.hpp"
#include "rqk/fourier.hpp"

// Locally transforming fields built from the probability amplitudes: the
// positive-energy Klein-Gordon scalar
//   phi(x) = integral (d3p/w) e^{-i p.x} sqrt(w) Psi(p)
// and the four-component positive-energy Dirac solution assembled with the
// 2x2 boost matrices D^(r)[p] in the Weyl (chiral) gamma representation.
// Neither is a probability amplitude; |phi|^2 is not a probability density.

namespace rqk {

/// D^(r)[p] = sqrt((w+m)/2m) + r sqrt((w-m)/2m) phat.sigma, r = +-1.
/// Identity at p = 0; determinant real and positive.
struct DiracBoostMatrix {
    int r;
    Eigen::Matrix2cd entries;
};
DiracBoostMatrix dirac_boost(int r, const MassShellMomentum& p);

/// Weyl (chiral) gamma matrices: g0 = [[0,I],[I,0]], gi = [[0,si],[-si,0]].
std::array<Eigen::Matrix4cd, 4> weyl_gammas();

struct ScalarField {
    GridSpec xspec;
    GridData values;
    double t = 0.0;
};

struct DiracField {
    enum class GammaRep { Weyl };
    GridSpec xspec;
    std::array<GridData, 4> comps;
    double t = 0.0;
    GammaRep rep = GammaRep::Weyl;
};

/// Klein-Gordon scalar on the dual position grid (s = 0, grid carrier).
ScalarField kg_scalar(const MomentumAmplitude& psi, double t);

/// Four-component Dirac field (s = 1/2, grid carrier): row a of the
/// plane-wave column is (D^(-) chi_m; D^(+) chi_m)_a / sqrt(2), summed over m.
DiracField dirac_build(const MomentumAmplitude& psi, double t);

/// Plane-wave Dirac coefficient u(p) for spin weights c (2 entries, m = +-1/2).
Eigen::Vector4cd dirac_momentum_coefficient(const MassShellMomentum& p,
                                            const Eigen::Vector2cd& c);

/// |(gamma.p - m) u(p)| / (m |u(p)|) for the assembled coefficient; zero up
/// to rounding for every on-shell p.
double dirac_momentum_residual(const MassShellMomentum& p, const Eigen::Vector2cd& c);

/// Relative spectral residual of (d^mu d_mu + m0^2) on phi built from psi.
double kg_scalar_residual(const MomentumAmplitude& psi);

/// Relative spectral residual of (i gamma^mu d_mu - m) on the Dirac field
/// built from psi (grid carrier).
double dirac_position_residual(const MomentumAmplitude& psi);

}  // namespace rqk

#endif

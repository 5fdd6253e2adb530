#ifndef RQK_CAUSALITY_HPP
#define RQK_CAUSALITY_HPP

#include <vector>

#include "rqk/kinematics.hpp"

// Spherically symmetric spreading of an ultra-relativistic Gaussian packet in
// scaled variables (momentum width 1, massless dispersion by default), and
// the in-cone/initial probability ratio C(tau, rho) used to quantify how
// close the evolution stays to strict light-cone confinement.

namespace rqk {

/// Scaled packet Psi(kappa) = e^{-kappa^2/4} / (2 pi)^{3/4}; unit norm in
/// d3kappa. mass_ratio = m0/sigma_p generalizes the dispersion for
/// sensitivity checks (0 = massless limit used throughout).
struct ScaledPacket {
    double mass_ratio = 0.0;
};

/// Time-dependent radial wavefunction psi(tau, rho), closed form through the
/// Dawson function:
///   psi = -i (2 pi)^{-3/4} pi^{-1/2} rho^{-1} [g(tau - rho) - g(tau + rho)],
///   g(a) = 1 - a F(a/2) - i (a sqrt(pi)/2) e^{-a^2/4}.
/// The rho -> 0 limit is finite (taken analytically below 1e-5).
cplx spatial_wavefunction(double tau, double rho);

/// Oracle path: adaptive radial quadrature of
///   (2 pi)^{-3/4} pi^{-1/2} rho^{-1} int_0^inf dk k sin(k rho / 2)
///       e^{-k^2/4} e^{-i sqrt(k^2 + mr^2) tau / 2}.
/// Throws std::runtime_error (with the achieved estimate) on non-convergence.
cplx spatial_wavefunction_quadrature(double tau, double rho, double rel_tol = 1e-10,
                                     const ScaledPacket& packet = {});

/// In-cone probability at time tau over the initially enclosed probability:
///   C = int_0^{rho+tau} 4 pi r^2 |psi(tau, r)|^2 dr
///       / int_0^{rho} 4 pi r^2 |psi(0, r)|^2 dr.
/// Throws std::domain_error when the denominator underflows (diverging ratio).
double causality_ratio(double tau, double rho, double rel_tol = 1e-7);

struct CausalityCurve {
    double tau = 0.0;
    double rel_tol = 0.0;
    std::vector<std::pair<double, double>> samples;  // (rho, C)
    double min_c = 0.0;
    double argmin_rho = 0.0;
};

/// Evaluate C(tau, .) on a monotone rho grid; also reports min C and argmin.
CausalityCurve causality_scan(double tau, const std::vector<double>& rho_grid,
                              double rel_tol = 1e-7);

}  // namespace rqk

#endif

#include "rqk/covariant.hpp"

#include <cmath>
#include <stdexcept>

namespace rqk {

namespace {
using namespace std::complex_literals;

Eigen::Matrix2cd pauli(int i) {
    Eigen::Matrix2cd s;
    switch (i) {
        case 0: s << 0, 1, 1, 0; break;
        case 1: s << 0, -1i, 1i, 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

void check_grid_spin(const MomentumAmplitude& psi, int two_s, const char* what) {
    if (psi.particle().s.two_s != two_s)
        throw std::invalid_argument(std::string(what) + ": wrong spin");
    if (!psi.is_grid())
        throw std::invalid_argument(std::string(what) + ": grid carrier required");
}
}  // namespace

DiracBoostMatrix dirac_boost(int r, const MassShellMomentum& p) {
    if (r != 1 && r != -1) throw std::domain_error("dirac_boost: r must be +-1");
    const double w = p.omega();
    Eigen::Matrix2cd m =
        std::sqrt((w + p.m0) / (2.0 * p.m0)) * Eigen::Matrix2cd::Identity();
    const double pn = p.p.norm();
    if (pn > 0.0) {
        const Vec3 ph = p.p / pn;
        Eigen::Matrix2cd psig = Eigen::Matrix2cd::Zero();
        for (int i = 0; i < 3; ++i) psig += ph(i) * pauli(i);
        m += double(r) * std::sqrt((w - p.m0) / (2.0 * p.m0)) * psig;
    }
    return DiracBoostMatrix{r, m};
}

std::array<Eigen::Matrix4cd, 4> weyl_gammas() {
    std::array<Eigen::Matrix4cd, 4> g;
    g[0].setZero();
    g[0].block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();
    g[0].block<2, 2>(2, 0) = Eigen::Matrix2cd::Identity();
    for (int i = 1; i < 4; ++i) {
        g[i].setZero();
        g[i].block<2, 2>(0, 2) = pauli(i - 1);
        g[i].block<2, 2>(2, 0) = -pauli(i - 1);
    }
    return g;
}

ScalarField kg_scalar(const MomentumAmplitude& psi, double t) {
    check_grid_spin(psi, 0, "kg_scalar");
    const GridCarrier& g = psi.grid();
    const int n = g.spec.n;
    GridData integrand(g.spec.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 p = g.spec.point(i, j, k);
                const double w = psi.particle().omega(p);
                integrand(g.spec.index(i, j, k)) =
                    g.comps[0](g.spec.index(i, j, k)) / std::sqrt(w) *
                    std::exp(-1i * w * t);
            }
    FourierEngine engine(g.spec);
    ScalarField out;
    out.xspec = engine.position_spec();
    // The field carries no (2 pi)^{-3/2}; undo the engine's symmetric factor.
    out.values = std::pow(2.0 * M_PI, 1.5) * engine.to_position(integrand);
    out.t = t;
    return out;
}

Eigen::Vector4cd dirac_momentum_coefficient(const MassShellMomentum& p,
                                            const Eigen::Vector2cd& c) {
    const Eigen::Matrix2cd dm = dirac_boost(-1, p).entries;
    const Eigen::Matrix2cd dp = dirac_boost(+1, p).entries;
    Eigen::Vector4cd u;
    u.head<2>() = dm * c;
    u.tail<2>() = dp * c;
    return u / std::sqrt(2.0);
}

DiracField dirac_build(const MomentumAmplitude& psi, double t) {
    check_grid_spin(psi, 1, "dirac_build");
    const GridCarrier& g = psi.grid();
    const int n = g.spec.n;
    std::array<GridData, 4> integrands;
    for (GridData& d : integrands) d.resize(g.spec.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = g.spec.index(i, j, k);
                const MassShellMomentum p(psi.particle().m0, g.spec.point(i, j, k));
                const double w = p.omega();
                const Eigen::Vector2cd c(g.comps[0](idx), g.comps[1](idx));
                const Eigen::Vector4cd u =
                    dirac_momentum_coefficient(p, c) / std::sqrt(w) *
                    std::exp(-1i * w * t);
                for (int a = 0; a < 4; ++a) integrands[a](idx) = u(a);
            }
    FourierEngine engine(g.spec);
    DiracField out;
    out.xspec = engine.position_spec();
    out.t = t;
    const double undo = std::pow(2.0 * M_PI, 1.5);
    for (int a = 0; a < 4; ++a) out.comps[a] = undo * engine.to_position(integrands[a]);
    return out;
}

double dirac_momentum_residual(const MassShellMomentum& p, const Eigen::Vector2cd& c) {
    const auto g = weyl_gammas();
    Eigen::Matrix4cd slash = g[0] * p.omega();
    for (int i = 0; i < 3; ++i) slash -= g[i + 1] * p.p(i);
    const Eigen::Vector4cd u = dirac_momentum_coefficient(p, c);
    return (slash * u - p.m0 * u).norm() / (p.m0 * u.norm());
}

double kg_scalar_residual(const MomentumAmplitude& psi) {
    check_grid_spin(psi, 0, "kg_scalar_residual");
    const GridCarrier& g = psi.grid();
    const double m2 = psi.particle().m0 * psi.particle().m0;
    double num = 0.0, den = 0.0;
    const int n = g.spec.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 p = g.spec.point(i, j, k);
                const double w = psi.particle().omega(p);
                const double mode = std::norm(g.comps[0](g.spec.index(i, j, k))) / w;
                const double op = p.squaredNorm() + m2 - w * w;
                num += op * op * mode;
                den += (w * w) * (w * w) * mode;
            }
    return std::sqrt(num / den);
}

double dirac_position_residual(const MomentumAmplitude& psi) {
    check_grid_spin(psi, 1, "dirac_position_residual");
    const GridCarrier& g = psi.grid();
    const auto gam = weyl_gammas();
    const double m0 = psi.particle().m0;
    double num = 0.0, den = 0.0;
    const int n = g.spec.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = g.spec.index(i, j, k);
                const MassShellMomentum p(m0, g.spec.point(i, j, k));
                const Eigen::Vector2cd c(g.comps[0](idx), g.comps[1](idx));
                const Eigen::Vector4cd u = dirac_momentum_coefficient(p, c);
                // i gamma.d acting on e^{-i p.x} gives gamma^0 w - gamma.p.
                Eigen::Matrix4cd slash = gam[0] * p.omega();
                for (int a = 0; a < 3; ++a) slash -= gam[a + 1] * p.p(a);
                num += (slash * u - m0 * u).squaredNorm();
                den += (m0 * m0) * u.squaredNorm();
            }
    return std::sqrt(num / den);
}

}  // namespace rqk

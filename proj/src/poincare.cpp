#include "rqk/poincare.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "rqk/amplitudes.hpp"
#include "rqk/spin.hpp"

namespace rqk {

namespace {
using namespace std::complex_literals;

// Analytic carriers just grow their transformation chain; only the support
// tracking (quadrature placement) is updated eagerly.
MomentumAmplitude chain_append(const MomentumAmplitude& psi, PoincareElement g) {
    AnalyticCarrier c = psi.analytic();
    if (const auto* tr = std::get_if<Translation>(&g)) {
        c.phase_scale += std::abs(tr->a.t) + tr->a.r.norm();
    } else if (const auto* rot = std::get_if<Rotation>(&g)) {
        c.center = rot->R.apply(c.center);
        c.cov = rot->R.entries() * c.cov * rot->R.entries().transpose();
    } else if (const auto* bo = std::get_if<Boost>(&g)) {
        const LorentzMatrix L = pure_boost(bo->beta0);
        const MassShellMomentum pc(psi.particle().m0, c.center);
        const Vec3 beta = pc.beta();
        // Local linearization of the on-shell momentum map for the support
        // covariance: dp'_i = (L_ij + L_i0 beta_j) dp_j.
        Mat3 J;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) J(i, j) = L(i + 1, j + 1) + L(i + 1, 0) * beta(j);
        c.center = L.apply(pc.four_momentum()).r;
        c.cov = J * c.cov * J.transpose();
        c.phase_scale *= bo->beta0.gamma() * (1.0 + bo->beta0.speed());
    } else {
        c.center = -c.center;  // parity or time reversal
    }
    c.chain.push_back(std::move(g));
    return psi.with_carrier(std::move(c));
}

// Resample a grid carrier through the momentum map p -> q(p) (the pre-image
// under the transformation), applying the per-cell spin mixing and Jacobian
// factor computed by `mixer`. Components are upsampled 2x spectrally, then
// read back with 6-point Lagrange interpolation.
template <typename Mixer>
MomentumAmplitude grid_resample(const MomentumAmplitude& psi,
                                const std::function<Vec3(const Vec3&)>& preimage,
                                Mixer&& mixer) {
    const GridCarrier& g = psi.grid();
    const int dim = psi.spin_dim();
    const int n = g.spec.n;

    // Pass 1: interpolated source values, one upsampled component at a time.
    std::vector<GridData> interp(dim);
    GridSpec fine;
    for (int m = 0; m < dim; ++m) {
        const GridData up = spectral_upsample(g.spec, g.comps[m], 2, &fine);
        GridData out(g.spec.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Vec3 q = preimage(g.spec.point(i, j, k));
                    out(g.spec.index(i, j, k)) = interpolate6(fine, up, q);
                }
        interp[m] = std::move(out);
    }

    // Pass 2: per-cell spin mixing.
    std::vector<GridData> comps(dim, GridData(g.spec.size()));
    Eigen::VectorXcd v(dim), w(dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = g.spec.index(i, j, k);
                for (int m = 0; m < dim; ++m) v(m) = interp[m](idx);
                mixer(g.spec.point(i, j, k), v, w);
                for (int m = 0; m < dim; ++m) comps[m](idx) = w(m);
            }

    const double before = grid_norm_squared(g.spec, g.comps);
    const double after = grid_norm_squared(g.spec, comps);
    GridCarrier out{g.spec, std::move(comps), std::max(0.0, before - after)};
    return psi.with_carrier(std::move(out));
}
}  // namespace

MomentumAmplitude translate(const MomentumAmplitude& psi, const FourVector& a) {
    if (psi.is_analytic()) return chain_append(psi, Translation{a});
    GridCarrier g = psi.grid();
    const int n = g.spec.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 p = g.spec.point(i, j, k);
                const cplx phase =
                    std::exp(1i * (psi.particle().omega(p) * a.t - p.dot(a.r)));
                for (GridData& c : g.comps) c(g.spec.index(i, j, k)) *= phase;
            }
    g.support_loss = 0.0;
    return psi.with_carrier(std::move(g));
}

MomentumAmplitude rotate(const MomentumAmplitude& psi, const RotationMatrix& R) {
    if (psi.is_analytic()) return chain_append(psi, Rotation{R});
    const RotationMatrix Rinv = R.inverse();
    if (psi.spin_dim() == 1) {
        return grid_resample(
            psi, [&](const Vec3& p) { return Rinv.apply(p); },
            [](const Vec3&, const Eigen::VectorXcd& v, Eigen::VectorXcd& w) { w = v; });
    }
    const WignerDMatrix D = wigner_d(psi.particle().s, su2_from_rotation(R));
    return grid_resample(
        psi, [&](const Vec3& p) { return Rinv.apply(p); },
        [&](const Vec3&, const Eigen::VectorXcd& v, Eigen::VectorXcd& w) { w = D * v; });
}

MomentumAmplitude boost(const MomentumAmplitude& psi, const Velocity3& beta0) {
    if (psi.is_analytic()) return chain_append(psi, Boost{beta0});
    const LorentzMatrix L = pure_boost(beta0);
    const LorentzMatrix Linv = L.inverse();
    const ParticleSpec& pt = psi.particle();
    const auto preimage = [&](const Vec3& p) {
        return Linv.apply(MassShellMomentum(pt.m0, p).four_momentum()).r;
    };
    return grid_resample(
        psi, preimage,
        [&](const Vec3& p, const Eigen::VectorXcd& v, Eigen::VectorXcd& w) {
            const Vec3 q = preimage(p);
            const double factor = std::sqrt(pt.omega(q) / pt.omega(p));
            if (psi.spin_dim() == 1) {
                w = factor * v;
                return;
            }
            const RotationMatrix wr = wigner_rotation(L, MassShellMomentum(pt.m0, q), 1e-8);
            w = factor * (wigner_d(pt.s, su2_from_rotation(wr)) * v);
        });
}

MomentumAmplitude parity(const MomentumAmplitude& psi) {
    if (psi.is_analytic()) return chain_append(psi, Parity{});
    const GridCarrier& g = psi.grid();
    const int n = g.spec.n;
    std::vector<GridData> comps(psi.spin_dim(), GridData(g.spec.size()));
    for (int m = 0; m < psi.spin_dim(); ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    comps[m](g.spec.index(i, j, k)) =
                        double(psi.particle().eta) *
                        g.comps[m](g.spec.index(n - 1 - i, n - 1 - j, n - 1 - k));
    return psi.with_carrier(GridCarrier{g.spec, std::move(comps), 0.0});
}

MomentumAmplitude time_reverse(const MomentumAmplitude& psi) {
    if (psi.is_analytic()) return chain_append(psi, TimeReversal{});
    const GridCarrier& g = psi.grid();
    const int n = g.spec.n;
    const int dim = psi.spin_dim();
    std::vector<GridData> comps(dim, GridData(g.spec.size()));
    for (int m = 0; m < dim; ++m) {
        const double ph = psi.particle().s.phase_s_plus_m(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    comps[m](g.spec.index(i, j, k)) =
                        ph * std::conj(g.comps[dim - 1 - m](
                                 g.spec.index(n - 1 - i, n - 1 - j, n - 1 - k)));
    }
    return psi.with_carrier(GridCarrier{g.spec, std::move(comps), 0.0});
}

MomentumAmplitude apply(const MomentumAmplitude& psi, const PoincareElement& g) {
    return std::visit(
        [&](const auto& e) -> MomentumAmplitude {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Translation>) return translate(psi, e.a);
            else if constexpr (std::is_same_v<T, Rotation>) return rotate(psi, e.R);
            else if constexpr (std::is_same_v<T, Boost>) return boost(psi, e.beta0);
            else if constexpr (std::is_same_v<T, Parity>) return parity(psi);
            else return time_reverse(psi);
        },
        g);
}

}  // namespace rqk

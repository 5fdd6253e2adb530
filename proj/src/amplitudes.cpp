#include "rqk/amplitudes.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "rqk/quadrature.hpp"

namespace rqk {

namespace {
using namespace std::complex_literals;

Eigen::VectorXcd eval_gaussian(const ParticleSpec&, const GaussianData& g, const Vec3& p) {
    const double s2 = g.sigma_p * g.sigma_p;
    const double norm = std::pow(2.0 * M_PI * s2, -0.75);
    const double amp = norm * std::exp(-(p - g.pbar).squaredNorm() / (4.0 * s2));
    return amp * std::exp(-1i * p.dot(g.xbar)) * g.weights;
}

// Value of the chained analytic amplitude with the first `depth` chain
// elements applied.
Eigen::VectorXcd eval_chain(const ParticleSpec& pt, const AnalyticCarrier& c,
                            std::size_t depth, const Vec3& p) {
    if (depth == 0) return eval_gaussian(pt, c.base, p);
    const PoincareElement& g = c.chain[depth - 1];

    if (const auto* tr = std::get_if<Translation>(&g)) {
        const cplx phase = std::exp(1i * (pt.omega(p) * tr->a.t - p.dot(tr->a.r)));
        return phase * eval_chain(pt, c, depth - 1, p);
    }
    if (const auto* rot = std::get_if<Rotation>(&g)) {
        Eigen::VectorXcd v = eval_chain(pt, c, depth - 1, rot->R.inverse().apply(p));
        if (pt.s.two_s == 0) return v;
        return wigner_d(pt.s, su2_from_rotation(rot->R)) * v;
    }
    if (const auto* bo = std::get_if<Boost>(&g)) {
        const LorentzMatrix L = pure_boost(bo->beta0);
        const MassShellMomentum pm(pt.m0, p);
        const Vec3 q = L.inverse().apply(pm.four_momentum()).r;
        const double factor = std::sqrt(pt.omega(q) / pt.omega(p));
        Eigen::VectorXcd v = eval_chain(pt, c, depth - 1, q);
        if (pt.s.two_s == 0) return factor * v;
        const RotationMatrix w = wigner_rotation(L, MassShellMomentum(pt.m0, q), 1e-8);
        return factor * (wigner_d(pt.s, su2_from_rotation(w)) * v);
    }
    if (std::holds_alternative<Parity>(g)) {
        return double(pt.eta) * eval_chain(pt, c, depth - 1, -p);
    }
    // Time reversal: Psi'_m(p) = (-)^(s+m) Psi*_{-m}(-p).
    const Eigen::VectorXcd v = eval_chain(pt, c, depth - 1, -p);
    const int dim = pt.s.dim();
    Eigen::VectorXcd out(dim);
    for (int i = 0; i < dim; ++i)
        out(i) = double(pt.s.phase_s_plus_m(i)) * std::conj(v(dim - 1 - i));
    return out;
}

void check_compatible(const MomentumAmplitude& a, const MomentumAmplitude& b) {
    if (!(a.particle() == b.particle()))
        throw std::invalid_argument("amplitudes: mismatched particle specs");
    if (a.is_grid() != b.is_grid())
        throw std::invalid_argument("amplitudes: mixed analytic/grid carriers");
    if (a.is_grid() && !(a.grid().spec == b.grid().spec))
        throw std::invalid_argument("amplitudes: mismatched grid specs");
}

// Forward momentum map of the chain: the point where the chained amplitude
// inherits the base-Gaussian value at q. Integrals of a single chained
// amplitude are pulled back through this map; d^3p/omega is invariant, so
// the measure factor is exactly omega(p)/omega(q) and the integrand keeps
// the base Gaussian decay regardless of chain length.
Vec3 chain_forward(const ParticleSpec& pt, const std::vector<PoincareElement>& chain,
                   Vec3 q) {
    for (const PoincareElement& g : chain) {
        if (std::holds_alternative<Translation>(g)) continue;
        if (const auto* rot = std::get_if<Rotation>(&g))
            q = rot->R.apply(q);
        else if (const auto* bo = std::get_if<Boost>(&g))
            q = pure_boost(bo->beta0).apply(MassShellMomentum(pt.m0, q).four_momentum()).r;
        else
            q = -q;  // parity or time reversal
    }
    return q;
}

// Quadrature placement for a pair of analytic carriers: the equivalent
// Gaussian of |Psi_a* Psi_b| has precision (Sa^-1 + Sb^-1)/2.
void combined_support(const AnalyticCarrier& a, const AnalyticCarrier& b, Vec3& center,
                      Mat3& cov) {
    const Mat3 pa = a.cov.inverse(), pb = b.cov.inverse();
    const Mat3 prec = 0.5 * (pa + pb);
    cov = prec.inverse();
    center = prec.inverse() * (0.5 * (pa * a.center + pb * b.center));
}

bool element_equal(const PoincareElement& a, const PoincareElement& b) {
    if (a.index() != b.index()) return false;
    if (const auto* tr = std::get_if<Translation>(&a)) {
        const auto& o = std::get<Translation>(b);
        return tr->a.t == o.a.t && tr->a.r == o.a.r;
    }
    if (const auto* rot = std::get_if<Rotation>(&a))
        return rot->R.entries() == std::get<Rotation>(b).R.entries();
    if (const auto* bo = std::get_if<Boost>(&a))
        return bo->beta0.beta() == std::get<Boost>(b).beta0.beta();
    return true;  // parity / time reversal carry no parameters
}

bool same_chain(const std::vector<PoincareElement>& a,
                const std::vector<PoincareElement>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!element_equal(a[i], b[i])) return false;
    return true;
}

template <typename F>
void gh_foreach(const Vec3& center, const Mat3& cov, int n, F&& f) {
    const GaussHermiteRule& rule = gauss_hermite(n);
    Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    Vec3 scale;
    for (int i = 0; i < 3; ++i)
        scale(i) = std::sqrt(std::max(2.0 * es.eigenvalues()(i), 1e-300));
    const Mat3 axes = es.eigenvectors();
    const double jac = scale(0) * scale(1) * scale(2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 u(rule.nodes[i] * scale(0), rule.nodes[j] * scale(1),
                             rule.nodes[k] * scale(2));
                const double w = rule.wexp[i] * rule.wexp[j] * rule.wexp[k] * jac;
                f(center + axes * u, w);
            }
}

int pair_nodes(const MomentumAmplitude& a, const MomentumAmplitude& b) {
    return std::max(a.quadrature_nodes(), b.quadrature_nodes());
}

void check_finite(const std::vector<GridData>& comps) {
    for (const GridData& c : comps)
        if (!c.allFinite()) throw std::runtime_error("grid amplitude: non-finite samples");
}
}  // namespace

ParticleSpec::ParticleSpec(double mass, SpinValue spin, int parity)
    : m0(mass), s(spin), eta(parity) {
    if (!(m0 > 0.0)) throw std::domain_error("ParticleSpec: m0 must be > 0");
    if (eta != 1 && eta != -1) throw std::domain_error("ParticleSpec: eta must be +-1");
}

MomentumAmplitude MomentumAmplitude::gaussian(const ParticleSpec& particle, const Vec3& pbar,
                                              double sigma_p, const Vec3& xbar,
                                              const Eigen::VectorXcd& weights) {
    if (!(sigma_p > 0.0)) throw std::domain_error("gaussian: sigma_p must be > 0");
    if (weights.size() != particle.s.dim())
        throw std::invalid_argument("gaussian: need 2s+1 spin weights");
    const double wn = weights.norm();
    if (!(wn > 0.0)) throw std::invalid_argument("gaussian: zero spin weights");
    AnalyticCarrier c{GaussianData{pbar, sigma_p, xbar, weights / wn},
                      {},
                      pbar,
                      sigma_p * sigma_p * Mat3::Identity(),
                      xbar.norm()};
    return MomentumAmplitude(particle, std::move(c));
}

MomentumAmplitude MomentumAmplitude::gaussian_grid(const ParticleSpec& particle,
                                                   const Vec3& pbar, double sigma_p,
                                                   const Vec3& xbar,
                                                   const Eigen::VectorXcd& weights,
                                                   const GridSpec& spec) {
    // Analytic tail-mass estimate per axis; the box must hold all but 1e-12.
    double inside = 1.0;
    for (int a = 0; a < 3; ++a) {
        const double lo = (-spec.pmax - pbar(a)) / (sigma_p * std::sqrt(2.0));
        const double hi = (spec.pmax - pbar(a)) / (sigma_p * std::sqrt(2.0));
        inside *= 0.5 * (std::erf(hi) - std::erf(lo));
    }
    if (1.0 - inside > 1e-12)
        throw std::domain_error("gaussian_grid: tail mass outside the box exceeds 1e-12");
    return gaussian(particle, pbar, sigma_p, xbar, weights).to_grid(spec);
}

MomentumAmplitude MomentumAmplitude::from_grid(const ParticleSpec& particle,
                                               const GridSpec& spec,
                                               std::vector<GridData> comps) {
    if ((int)comps.size() != particle.s.dim())
        throw std::invalid_argument("from_grid: need 2s+1 components");
    for (const GridData& c : comps)
        if (c.size() != (Eigen::Index)spec.size())
            throw std::invalid_argument("from_grid: component size mismatch");
    check_finite(comps);
    if (boundary_shell_mass(spec, comps) > 1e-12)
        throw std::domain_error("from_grid: boundary-shell mass exceeds 1e-12");
    const double nrm = std::sqrt(grid_norm_squared(spec, comps));
    if (!(nrm > 0.0)) throw std::invalid_argument("from_grid: zero data");
    for (GridData& c : comps) c /= nrm;
    return MomentumAmplitude(particle, GridCarrier{spec, std::move(comps), 0.0});
}

Eigen::VectorXcd MomentumAmplitude::evaluate(const Vec3& p) const {
    if (is_analytic()) {
        const AnalyticCarrier& c = analytic();
        return eval_chain(particle_, c, c.chain.size(), p);
    }
    const GridCarrier& g = grid();
    Eigen::VectorXcd out(spin_dim());
    for (int m = 0; m < spin_dim(); ++m) out(m) = interpolate6(g.spec, g.comps[m], p);
    return out;
}

int MomentumAmplitude::quadrature_nodes() const {
    if (!is_analytic()) return 0;
    const AnalyticCarrier& c = analytic();
    const double sig = std::sqrt(c.cov.eigenvalues().real().maxCoeff());
    const int n = 32 + int(std::ceil(6.0 * sig * c.phase_scale));
    return std::min(n, 96);
}

MomentumAmplitude MomentumAmplitude::to_grid(const GridSpec& spec) const {
    if (is_grid()) {
        if (grid().spec == spec) return *this;
        throw std::invalid_argument("to_grid: regridding between specs not supported");
    }
    std::vector<GridData> comps(spin_dim(), GridData(spec.size()));
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j)
            for (int k = 0; k < spec.n; ++k) {
                const Eigen::VectorXcd v = evaluate(spec.point(i, j, k));
                for (int m = 0; m < spin_dim(); ++m) comps[m](spec.index(i, j, k)) = v(m);
            }
    return from_grid(particle_, spec, std::move(comps));
}

MomentumAmplitude MomentumAmplitude::with_carrier(AnalyticCarrier c) const {
    return MomentumAmplitude(particle_, std::move(c));
}
MomentumAmplitude MomentumAmplitude::with_carrier(GridCarrier c) const {
    return MomentumAmplitude(particle_, std::move(c));
}

MomentumAmplitude MomentumAmplitude::scaled(cplx factor) const {
    if (is_analytic()) {
        AnalyticCarrier c = analytic();
        c.base.weights *= factor;
        return with_carrier(std::move(c));
    }
    GridCarrier g = grid();
    for (GridData& d : g.comps) d *= factor;
    return with_carrier(std::move(g));
}

double norm_squared(const MomentumAmplitude& psi) {
    if (psi.is_grid()) return grid_norm_squared(psi.grid().spec, psi.grid().comps);
    const AnalyticCarrier& c = psi.analytic();
    const Mat3 base_cov = c.base.sigma_p * c.base.sigma_p * Mat3::Identity();
    double total = 0.0;
    gh_foreach(c.base.pbar, base_cov, psi.quadrature_nodes(), [&](const Vec3& q, double w) {
        const Vec3 p = chain_forward(psi.particle(), c.chain, q);
        const Eigen::VectorXcd v = psi.evaluate(p);
        if (!v.allFinite()) throw std::runtime_error("norm_squared: non-finite sample");
        total += w * v.squaredNorm() * psi.particle().omega(p) / psi.particle().omega(q);
    });
    return total;
}

double norm_squared_covariant(const MomentumAmplitude& psi) {
    const auto phi_form = [&](const Vec3& p) {
        const double w = psi.particle().omega(p);
        return (std::sqrt(w) * psi.evaluate(p)).squaredNorm() / w;
    };
    if (psi.is_grid()) {
        const GridCarrier& g = psi.grid();
        double total = 0.0;
        for (int i = 0; i < g.spec.n; ++i)
            for (int j = 0; j < g.spec.n; ++j)
                for (int k = 0; k < g.spec.n; ++k) {
                    const Vec3 p = g.spec.point(i, j, k);
                    const double w = psi.particle().omega(p);
                    double s = 0.0;
                    for (int m = 0; m < psi.spin_dim(); ++m)
                        s += std::norm(g.comps[m](g.spec.index(i, j, k))) * w;
                    total += s / w;
                }
        return total * g.spec.cell_volume();
    }
    const AnalyticCarrier& c = psi.analytic();
    const Mat3 base_cov = c.base.sigma_p * c.base.sigma_p * Mat3::Identity();
    double total = 0.0;
    gh_foreach(c.base.pbar, base_cov, psi.quadrature_nodes(), [&](const Vec3& q, double w) {
        const Vec3 p = chain_forward(psi.particle(), c.chain, q);
        total += w * phi_form(p) * psi.particle().omega(p) / psi.particle().omega(q);
    });
    return total;
}

cplx scalar_product(const MomentumAmplitude& a, const MomentumAmplitude& b) {
    check_compatible(a, b);
    if (a.is_grid()) {
        cplx total = 0.0;
        for (int m = 0; m < a.spin_dim(); ++m)
            total += a.grid().comps[m].dot(b.grid().comps[m]);  // conjugates a
        return total * a.grid().spec.cell_volume();
    }
    const AnalyticCarrier& ca = a.analytic();
    const AnalyticCarrier& cb = b.analytic();
    cplx total = 0.0;
    if (!ca.chain.empty() && same_chain(ca.chain, cb.chain)) {
        // Identical chains (one sequence applied to both factors): pull the
        // integral back through the chain. The linearized combined support
        // below underestimates boosted tails; the base-coordinate integrand
        // keeps exact Gaussian decay and the measure costs omega(p)/omega(q).
        const Mat3 pa = Mat3::Identity() / (ca.base.sigma_p * ca.base.sigma_p);
        const Mat3 pb = Mat3::Identity() / (cb.base.sigma_p * cb.base.sigma_p);
        const Mat3 cov = (0.5 * (pa + pb)).inverse();
        const Vec3 center = cov * (0.5 * (pa * ca.base.pbar + pb * cb.base.pbar));
        gh_foreach(center, cov, pair_nodes(a, b), [&](const Vec3& q, double w) {
            const Vec3 p = chain_forward(a.particle(), ca.chain, q);
            total += w * a.evaluate(p).dot(b.evaluate(p)) *
                     (a.particle().omega(p) / a.particle().omega(q));
        });
        return total;
    }
    Vec3 center;
    Mat3 cov;
    combined_support(ca, cb, center, cov);
    gh_foreach(center, cov, pair_nodes(a, b), [&](const Vec3& p, double w) {
        total += w * a.evaluate(p).dot(b.evaluate(p));  // dot conjugates a
    });
    return total;
}

FourVector expectation_four_momentum(const MomentumAmplitude& psi) {
    FourVector out;
    if (psi.is_grid()) {
        const GridCarrier& g = psi.grid();
        for (int i = 0; i < g.spec.n; ++i)
            for (int j = 0; j < g.spec.n; ++j)
                for (int k = 0; k < g.spec.n; ++k) {
                    double rho = 0.0;
                    for (int m = 0; m < psi.spin_dim(); ++m)
                        rho += std::norm(g.comps[m](g.spec.index(i, j, k)));
                    const Vec3 p = g.spec.point(i, j, k);
                    out.t += rho * psi.particle().omega(p);
                    out.r += rho * p;
                }
        out.t *= g.spec.cell_volume();
        out.r *= g.spec.cell_volume();
        return out;
    }
    const AnalyticCarrier& c = psi.analytic();
    const Mat3 base_cov = c.base.sigma_p * c.base.sigma_p * Mat3::Identity();
    gh_foreach(c.base.pbar, base_cov, psi.quadrature_nodes(), [&](const Vec3& q, double w) {
        const Vec3 p = chain_forward(psi.particle(), c.chain, q);
        const double rho =
            psi.evaluate(p).squaredNorm() * psi.particle().omega(p) / psi.particle().omega(q);
        out.t += w * rho * psi.particle().omega(p);
        out.r += w * rho * p;
    });
    return out;
}

MomentumDensity momentum_density(const MomentumAmplitude& psi) { return MomentumDensity(psi); }

double scalar_density(const MomentumAmplitude& psi, const Vec3& p) {
    return psi.particle().omega(p) * psi.evaluate(p).squaredNorm();
}

namespace {
template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace

void write_grid(std::ostream& out, const MomentumAmplitude& psi) {
    if (!psi.is_grid()) throw std::invalid_argument("write_grid: grid carrier required");
    const GridCarrier& g = psi.grid();
    out.write("RQKG", 4);
    put<std::uint32_t>(out, 1);  // version
    put<std::uint32_t>(out, std::uint32_t(g.spec.n));
    put<double>(out, g.spec.pmax);
    put<std::uint32_t>(out, std::uint32_t(psi.particle().s.two_s));
    put<double>(out, psi.particle().m0);
    put<std::int32_t>(out, psi.particle().eta);
    for (const GridData& c : g.comps)
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            put<float>(out, float(c(i).real()));
            put<float>(out, float(c(i).imag()));
        }
}

MomentumAmplitude read_grid(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "RQKG", 4) != 0)
        throw std::runtime_error("read_grid: bad magic");
    if (get<std::uint32_t>(in) != 1) throw std::runtime_error("read_grid: bad version");
    GridSpec spec;
    spec.n = int(get<std::uint32_t>(in));
    spec.pmax = get<double>(in);
    const int two_s = int(get<std::uint32_t>(in));
    const double m0 = get<double>(in);
    const int eta = int(get<std::int32_t>(in));
    const ParticleSpec particle(m0, SpinValue::of_two_s(two_s), eta);
    std::vector<GridData> comps(particle.s.dim(), GridData(spec.size()));
    for (GridData& c : comps)
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            const float re = get<float>(in);
            const float im = get<float>(in);
            c(i) = cplx(re, im);
        }
    if (!in) throw std::runtime_error("read_grid: truncated data");
    return MomentumAmplitude::from_grid(particle, spec, std::move(comps));
}

Vec3 chain_forward_momentum(const ParticleSpec& pt,
                            const std::vector<PoincareElement>& chain, const Vec3& q) {
    return chain_forward(pt, chain, q);
}

}  // namespace rqk

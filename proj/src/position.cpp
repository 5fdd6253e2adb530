#include "rqk/position.hpp"

#include <cmath>
#include <stdexcept>

#include "rqk/quadrature.hpp"

namespace rqk {

namespace {
using namespace std::complex_literals;
using Jet = MomentumField::Jet;

// ---- analytic jets (value + first derivative) through the carrier chain ----

Jet base_jet(const GaussianData& gd, const Vec3& p, bool need_grad) {
    const double s2 = gd.sigma_p * gd.sigma_p;
    const double norm = std::pow(2.0 * M_PI * s2, -0.75);
    const cplx amp = norm * std::exp(-(p - gd.pbar).squaredNorm() / (4.0 * s2)) *
                     std::exp(-1i * p.dot(gd.xbar));
    Jet out;
    out.v = amp * gd.weights;
    if (need_grad) {
        out.g.resize(gd.weights.size(), 3);
        for (int j = 0; j < 3; ++j) {
            const cplx dlog = -(p(j) - gd.pbar(j)) / (2.0 * s2) - 1i * gd.xbar(j);
            out.g.col(j) = dlog * out.v;
        }
    }
    return out;
}

Jet chain_jet(const ParticleSpec& pt, const AnalyticCarrier& c, std::size_t depth,
              const Vec3& p, bool need_grad) {
    if (depth == 0) return base_jet(c.base, p, need_grad);
    const PoincareElement& g = c.chain[depth - 1];
    const int dim = pt.s.dim();

    if (const auto* tr = std::get_if<Translation>(&g)) {
        Jet in = chain_jet(pt, c, depth - 1, p, need_grad);
        const double w = pt.omega(p);
        const cplx phase = std::exp(1i * (w * tr->a.t - p.dot(tr->a.r)));
        Jet out;
        out.v = phase * in.v;
        if (need_grad) {
            out.g.resize(dim, 3);
            for (int j = 0; j < 3; ++j) {
                const cplx dphase = 1i * (tr->a.t * p(j) / w - tr->a.r(j));
                out.g.col(j) = phase * in.g.col(j) + dphase * out.v;
            }
        }
        return out;
    }
    if (const auto* rot = std::get_if<Rotation>(&g)) {
        Jet in = chain_jet(pt, c, depth - 1, rot->R.inverse().apply(p), need_grad);
        Jet out;
        if (pt.s.two_s == 0) {
            out.v = in.v;
            if (need_grad) out.g = in.g * rot->R.entries().transpose();
            return out;
        }
        const WignerDMatrix D = wigner_d(pt.s, su2_from_rotation(rot->R));
        out.v = D * in.v;
        if (need_grad) out.g = D * in.g * rot->R.entries().transpose();
        return out;
    }
    if (const auto* bo = std::get_if<Boost>(&g)) {
        const LorentzMatrix L = pure_boost(bo->beta0);
        const LorentzMatrix Linv = L.inverse();
        const double wp = pt.omega(p);
        const Vec3 q = Linv.apply(FourVector(wp, p)).r;
        const double wq = pt.omega(q);
        const double factor = std::sqrt(wq / wp);
        Jet in = chain_jet(pt, c, depth - 1, q, need_grad);
        Jet out;
        if (pt.s.two_s != 0) {
            if (need_grad)
                throw std::runtime_error(
                    "momentum field: derivative through a boost needs s = 0");
            const RotationMatrix wr = wigner_rotation(L, MassShellMomentum(pt.m0, q), 1e-8);
            out.v = factor * (wigner_d(pt.s, su2_from_rotation(wr)) * in.v);
            return out;
        }
        out.v = factor * in.v;
        if (need_grad) {
            Mat3 M;  // dq_i/dp_j on the mass shell
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    M(i, j) = Linv(i + 1, j + 1) + Linv(i + 1, 0) * p(j) / wp;
            out.g.resize(dim, 3);
            for (int j = 0; j < 3; ++j) {
                double dwq = 0.0;
                for (int k = 0; k < 3; ++k) dwq += q(k) * M(k, j);
                const double dlog = 0.5 * (dwq / (wq * wq) - p(j) / (wp * wp));
                Eigen::VectorXcd dv = Eigen::VectorXcd::Zero(dim);
                for (int k = 0; k < 3; ++k) dv += in.g.col(k) * M(k, j);
                out.g.col(j) = factor * dv + dlog * out.v;
            }
        }
        return out;
    }
    if (std::holds_alternative<Parity>(g)) {
        Jet in = chain_jet(pt, c, depth - 1, -p, need_grad);
        Jet out;
        out.v = double(pt.eta) * in.v;
        if (need_grad) out.g = -double(pt.eta) * in.g;
        return out;
    }
    // Time reversal.
    Jet in = chain_jet(pt, c, depth - 1, -p, need_grad);
    Jet out;
    out.v.resize(dim);
    if (need_grad) out.g.resize(dim, 3);
    for (int i = 0; i < dim; ++i) {
        const double ph = pt.s.phase_s_plus_m(i);
        out.v(i) = ph * std::conj(in.v(dim - 1 - i));
        if (need_grad)
            for (int j = 0; j < 3; ++j) out.g(i, j) = -ph * std::conj(in.g(dim - 1 - i, j));
    }
    return out;
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
                f(center + axes * u, rule.wexp[i] * rule.wexp[j] * rule.wexp[k] * jac);
            }
}
}  // namespace

// ---------------------------------- MomentumField ----------------------------------

MomentumField MomentumField::from_amplitude(const MomentumAmplitude& psi) {
    if (psi.is_grid()) {
        return on_grid(psi.grid().spec, psi.grid().comps);
    }
    const ParticleSpec pt = psi.particle();
    const AnalyticCarrier c = psi.analytic();
    Fn fn = [pt, c](const Vec3& p, bool need_grad) {
        return chain_jet(pt, c, c.chain.size(), p, need_grad);
    };
    MomentumField f =
        analytic(pt.s.dim(), std::move(fn), c.center, c.cov, psi.quadrature_nodes());
    if (!c.chain.empty()) {
        const std::vector<PoincareElement> chain = c.chain;
        f.pull_ = std::make_shared<const Pullback>(Pullback{
            c.base.pbar, c.base.sigma_p * c.base.sigma_p * Mat3::Identity(), pt.m0,
            [pt, chain](const Vec3& q) { return chain_forward_momentum(pt, chain, q); }});
    }
    return f;
}

MomentumField MomentumField::analytic(int dim, Fn fn, const Vec3& center, const Mat3& cov,
                                      int nodes) {
    MomentumField f;
    f.dim_ = dim;
    f.fn_ = std::move(fn);
    f.center_ = center;
    f.cov_ = cov;
    f.nodes_ = nodes;
    return f;
}

MomentumField MomentumField::on_grid(const GridSpec& spec, std::vector<GridData> comps) {
    MomentumField f;
    f.dim_ = int(comps.size());
    f.spec_ = spec;
    f.comps_ = std::move(comps);
    return f;
}

Jet MomentumField::at(const Vec3& p, bool need_grad) const {
    if (!is_grid()) return fn_(p, need_grad);
    if (need_grad)
        throw std::runtime_error("momentum field: pointwise gradient unavailable on grids");
    Jet out;
    out.v.resize(dim_);
    for (int m = 0; m < dim_; ++m) out.v(m) = interpolate6(spec_, comps_[m], p);
    return out;
}

cplx MomentumField::dot(const MomentumField& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("momentum field: dimension mismatch");
    if (is_grid() != o.is_grid())
        throw std::invalid_argument("momentum field: mixed grid/analytic product");
    if (is_grid()) {
        if (!(spec_ == o.spec_))
            throw std::invalid_argument("momentum field: grid spec mismatch");
        cplx total = 0.0;
        for (int m = 0; m < dim_; ++m) total += comps_[m].dot(o.comps_[m]);
        return total * spec_.cell_volume();
    }
    const int n = std::max(nodes_, o.nodes_);
    cplx total = 0.0;
    if (pull_ && pull_ == o.pull_) {
        // Both fields descend from the same chained amplitude: integrate in
        // the base variable, where the integrand decay is exactly the base
        // Gaussian (the linearized support can underestimate boost tails).
        const double m0 = pull_->m0;
        gh_foreach(pull_->center, pull_->cov, n, [&](const Vec3& q, double w) {
            const Vec3 p = pull_->map(q);
            const double meas = std::sqrt((p.squaredNorm() + m0 * m0) /
                                          (q.squaredNorm() + m0 * m0));
            total += w * meas * fn_(p, false).v.dot(o.fn_(p, false).v);
        });
        return total;
    }
    const Mat3 pa = cov_.inverse(), pb = o.cov_.inverse();
    const Mat3 cov = (0.5 * (pa + pb)).inverse();
    const Vec3 center = cov * (0.5 * (pa * center_ + pb * o.center_));
    gh_foreach(center, cov, n, [&](const Vec3& p, double w) {
        total += w * fn_(p, false).v.dot(o.fn_(p, false).v);  // dot conjugates the left
    });
    return total;
}

MomentumField MomentumField::multiplied(const std::function<double(const Vec3&)>& f,
                                        const std::function<Vec3(const Vec3&)>& grad_f) const {
    if (is_grid()) {
        std::vector<GridData> comps(dim_, GridData(spec_.size()));
        for (int i = 0; i < spec_.n; ++i)
            for (int j = 0; j < spec_.n; ++j)
                for (int k = 0; k < spec_.n; ++k) {
                    const double fv = f(spec_.point(i, j, k));
                    const std::size_t idx = spec_.index(i, j, k);
                    for (int m = 0; m < dim_; ++m) comps[m](idx) = fv * comps_[m](idx);
                }
        return on_grid(spec_, std::move(comps));
    }
    Fn base = fn_;
    Fn fn = [base, f, grad_f](const Vec3& p, bool need_grad) {
        Jet in = base(p, need_grad);
        const double fv = f(p);
        Jet out;
        out.v = fv * in.v;
        if (need_grad) {
            if (!grad_f)
                throw std::runtime_error("momentum field: multiplier gradient missing");
            const Vec3 df = grad_f(p);
            out.g.resize(in.v.size(), 3);
            for (int j = 0; j < 3; ++j) out.g.col(j) = fv * in.g.col(j) + df(j) * in.v;
        }
        return out;
    };
    MomentumField out = analytic(dim_, std::move(fn), center_, cov_, nodes_);
    out.pull_ = pull_;
    return out;
}

MomentumField MomentumField::xhat(int axis) const {
    if (is_grid()) {
        FourierEngine engine(spec_);
        std::vector<GridData> comps(dim_);
        for (int m = 0; m < dim_; ++m)
            comps[m] = 1i * engine.momentum_derivative(comps_[m], axis);
        return on_grid(spec_, std::move(comps));
    }
    Fn base = fn_;
    Fn fn = [base, axis](const Vec3& p, bool need_grad) {
        if (need_grad)
            throw std::runtime_error(
                "momentum field: second derivatives are not implemented");
        Jet in = base(p, true);
        Jet out;
        out.v = 1i * in.g.col(axis);
        return out;
    };
    MomentumField out = analytic(dim_, std::move(fn), center_, cov_, nodes_);
    out.pull_ = pull_;
    return out;
}

MomentumField MomentumField::operator+(const MomentumField& o) const {
    if (is_grid() && o.is_grid()) {
        std::vector<GridData> comps(dim_);
        for (int m = 0; m < dim_; ++m) comps[m] = comps_[m] + o.comps_[m];
        return on_grid(spec_, std::move(comps));
    }
    if (is_grid() || o.is_grid())
        throw std::invalid_argument("momentum field: mixed grid/analytic sum");
    Fn a = fn_, b = o.fn_;
    Fn fn = [a, b](const Vec3& p, bool need_grad) {
        Jet ja = a(p, need_grad), jb = b(p, need_grad);
        Jet out;
        out.v = ja.v + jb.v;
        if (need_grad) out.g = ja.g + jb.g;
        return out;
    };
    MomentumField out = analytic(dim_, std::move(fn), center_, cov_, std::max(nodes_, o.nodes_));
    if (pull_ == o.pull_) out.pull_ = pull_;
    return out;
}

MomentumField MomentumField::operator-(const MomentumField& o) const {
    return *this + (o * cplx(-1.0));
}

MomentumField MomentumField::operator*(cplx c) const {
    if (is_grid()) {
        std::vector<GridData> comps(dim_);
        for (int m = 0; m < dim_; ++m) comps[m] = c * comps_[m];
        return on_grid(spec_, std::move(comps));
    }
    Fn base = fn_;
    Fn fn = [base, c](const Vec3& p, bool need_grad) {
        Jet in = base(p, need_grad);
        Jet out;
        out.v = c * in.v;
        if (need_grad) out.g = c * in.g;
        return out;
    };
    MomentumField out = analytic(dim_, std::move(fn), center_, cov_, nodes_);
    out.pull_ = pull_;
    return out;
}

// -------------------------------- PositionAmplitude --------------------------------

PositionAmplitude::PositionAmplitude(MomentumAmplitude psi, double t)
    : psi_(std::move(psi)), t_(t) {
    if (!psi_.is_grid())
        throw std::invalid_argument(
            "position amplitude: grid carrier required (sample with to_grid first)");
    const GridCarrier& g = psi_.grid();
    aliasing_ = boundary_shell_mass(g.spec, g.comps) > 1e-8;
    FourierEngine engine(g.spec);
    xspec_ = engine.position_spec();
    xcomps_.resize(psi_.spin_dim());
    const int n = g.spec.n;
    for (int m = 0; m < psi_.spin_dim(); ++m) {
        GridData evolved = g.comps[m];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const std::size_t idx = g.spec.index(i, j, k);
                    evolved(idx) *= std::exp(
                        -1i * psi_.particle().omega(g.spec.point(i, j, k)) * t_);
                }
        xcomps_[m] = engine.to_position(evolved);
    }
}

double PositionAmplitude::norm_squared() const {
    return grid_norm_squared(xspec_, xcomps_);
}

Vec3 PositionAmplitude::position_expectation() const {
    Vec3 out = Vec3::Zero();
    const int n = xspec_.n;
    for (int m = 0; m < int(xcomps_.size()); ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    out += std::norm(xcomps_[m](xspec_.index(i, j, k))) *
                           xspec_.point(i, j, k);
    return out * xspec_.cell_volume();
}

PositionAmplitude to_position(const MomentumAmplitude& psi, double t) {
    return PositionAmplitude(psi, t);
}

PositionAmplitude evolve(const PositionAmplitude& psix, double dt) {
    return PositionAmplitude(psix.momentum(), psix.t() + dt);
}

MomentumAmplitude to_momentum(const PositionAmplitude& psix) {
    const MomentumAmplitude& psi = psix.momentum();
    GridCarrier g = psi.grid();
    const int n = g.spec.n;
    for (GridData& c : g.comps)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const std::size_t idx = g.spec.index(i, j, k);
                    c(idx) *= std::exp(
                        -1i * psi.particle().omega(g.spec.point(i, j, k)) * psix.t());
                }
    return psi.with_carrier(std::move(g));
}

std::array<MomentumField, 3> position_operator_apply(const MomentumAmplitude& psi) {
    const MomentumField f = MomentumField::from_amplitude(psi);
    return {f.xhat(0), f.xhat(1), f.xhat(2)};
}

NWCheckResult nw_identity_check(const CovariantAmplitude& a, const CovariantAmplitude& b) {
    const MomentumAmplitude& pa = a.to_momentum();
    const MomentumAmplitude& pb = b.to_momentum();
    if (!pa.is_analytic() || !pb.is_analytic())
        throw std::invalid_argument("nw_identity_check: analytic carriers required");
    if (!(pa.particle() == pb.particle()))
        throw std::invalid_argument("nw_identity_check: mismatched particles");
    const ParticleSpec pt = pa.particle();
    const AnalyticCarrier& ca = pa.analytic();
    const AnalyticCarrier& cb = pb.analytic();
    const MomentumField fa = MomentumField::from_amplitude(pa);
    const MomentumField fb = MomentumField::from_amplitude(pb);

    const Mat3 ia = ca.cov.inverse(), ib = cb.cov.inverse();
    const Mat3 cov = (0.5 * (ia + ib)).inverse();
    const Vec3 center = cov * (0.5 * (ia * ca.center + ib * cb.center));
    const int n = std::max(pa.quadrature_nodes(), pb.quadrature_nodes());

    NWCheckResult out;
    out.lhs.setZero();
    out.rhs.setZero();
    gh_foreach(center, cov, n, [&](const Vec3& p, double w) {
        const Jet ja = fa.at(p, false);
        const Jet jb = fb.at(p, true);
        const double om = pt.omega(p);
        const double sq = std::sqrt(om);
        for (int j = 0; j < 3; ++j) {
            // d/dp_j of Phi_b = sqrt(w) Psi_b.
            const Eigen::VectorXcd dphi =
                sq * jb.g.col(j) + (p(j) / (2.0 * om * sq)) * jb.v;
            const Eigen::VectorXcd nw =
                1i * dphi - 1i * (p(j) / (2.0 * om * om)) * (sq * jb.v);
            out.lhs(j) += w / om * (sq * ja.v).dot(nw);
            out.rhs(j) += w * ja.v.dot(1i * jb.g.col(j));
        }
    });
    return out;
}

PositionAmplitude boost_position_amplitude(const PositionAmplitude& psix,
                                           const Velocity3& beta0) {
    return PositionAmplitude(boost(psix.momentum(), beta0), psix.t());
}

namespace {
// Multipliers entering the boosted position operator and the velocity law.
struct BoostGeometry {
    Vec3 b0;       // beta0
    Vec3 zeta;     // unit boost axis
    double gamma0;
    double m0;

    double omega(const Vec3& p) const { return std::sqrt(p.squaredNorm() + m0 * m0); }
    Vec3 beta(const Vec3& p) const { return p / omega(p); }
    // d beta_i / d p_j.
    Mat3 dbeta(const Vec3& p) const {
        const double w = omega(p);
        return Mat3::Identity() / w - p * p.transpose() / (w * w * w);
    }
    double f(const Vec3& p) const { return 1.0 / (1.0 + b0.dot(beta(p))); }
    Vec3 grad_f(const Vec3& p) const {
        const double fv = f(p);
        return -fv * fv * (dbeta(p).transpose() * b0);
    }
    double g(const Vec3& p) const { return f(p) / gamma0; }
    Vec3 grad_g(const Vec3& p) const { return grad_f(p) / gamma0; }
    double beta_perp(const Vec3& p, int i) const {
        const Vec3 b = beta(p);
        return b(i) - zeta(i) * zeta.dot(b);
    }
    Vec3 grad_beta_perp(const Vec3& p, int i) const {
        const Mat3 db = dbeta(p);
        return db.row(i).transpose() - zeta(i) * (db.transpose() * zeta);
    }
};
}  // namespace

MomentumField boosted_position_operator_apply(const MomentumField& psi,
                                              const ParticleSpec& particle, int axis,
                                              const Velocity3& beta0) {
    if (psi.dim() != 1)
        throw std::invalid_argument("boosted position operator: spinless (s = 0) only");
    if (beta0.speed() == 0.0) return psi.xhat(axis);
    BoostGeometry bg{beta0.beta(), beta0.beta().normalized(), beta0.gamma(), particle.m0};

    const auto zeta_dot_xhat = [&](const MomentumField& field) {
        MomentumField acc = field.xhat(0) * cplx(bg.zeta(0));
        acc = acc + field.xhat(1) * cplx(bg.zeta(1));
        return acc + field.xhat(2) * cplx(bg.zeta(2));
    };
    const auto b0_dot_xhat = [&](const MomentumField& field) {
        MomentumField acc = field.xhat(0) * cplx(bg.b0(0));
        acc = acc + field.xhat(1) * cplx(bg.b0(1));
        return acc + field.xhat(2) * cplx(bg.b0(2));
    };
    const auto mul_f = [&](const MomentumField& field) {
        return field.multiplied([bg](const Vec3& p) { return bg.f(p); },
                                [bg](const Vec3& p) { return bg.grad_f(p); });
    };
    const auto mul_g = [&](const MomentumField& field) {
        return field.multiplied([bg](const Vec3& p) { return bg.g(p); },
                                [bg](const Vec3& p) { return bg.grad_g(p); });
    };
    const auto mul_beta_perp = [&](const MomentumField& field, int i) {
        return field.multiplied([bg, i](const Vec3& p) { return bg.beta_perp(p, i); },
                                [bg, i](const Vec3& p) { return bg.grad_beta_perp(p, i); });
    };

    // x_perp component.
    const MomentumField x_perp =
        psi.xhat(axis) - zeta_dot_xhat(psi) * cplx(bg.zeta(axis));
    // (1/2) { f beta_perp_i, b0 . x }: the multipliers group together on one
    // side of the anticommutator, which is the Hermitian reading (grouping
    // the multipliers with either factor gives the same operator).
    const auto mul_fbp = [&](const MomentumField& field) {
        return mul_beta_perp(mul_f(field), axis);
    };
    const MomentumField term2 =
        (mul_fbp(b0_dot_xhat(psi)) + b0_dot_xhat(mul_fbp(psi))) * cplx(0.5);
    // (1/2) { g, x_par_i }  with B = zeta_i (zeta . x).
    const MomentumField B_psi = zeta_dot_xhat(psi) * cplx(bg.zeta(axis));
    const MomentumField B_gpsi = zeta_dot_xhat(mul_g(psi)) * cplx(bg.zeta(axis));
    const MomentumField term3 = (mul_g(B_psi) + B_gpsi) * cplx(0.5);

    return x_perp - term2 + term3;
}

std::array<MomentumField, 3> boosted_position_operator_apply(const MomentumAmplitude& psi,
                                                             const Velocity3& beta0) {
    if (psi.particle().s.two_s != 0)
        throw std::invalid_argument("boosted position operator: spinless (s = 0) only");
    const MomentumField f = MomentumField::from_amplitude(psi);
    return {boosted_position_operator_apply(f, psi.particle(), 0, beta0),
            boosted_position_operator_apply(f, psi.particle(), 1, beta0),
            boosted_position_operator_apply(f, psi.particle(), 2, beta0)};
}

AverageEventResult average_event(const MomentumAmplitude& psi, const Velocity3& beta0,
                                 double t) {
    if (psi.particle().s.two_s != 0)
        throw std::invalid_argument("average_event: spinless (s = 0) only");
    if (!psi.is_analytic() || !psi.analytic().chain.empty())
        throw std::invalid_argument("average_event: plain Gaussian carrier required");
    const GaussianData& gd = psi.analytic().base;
    const double om_bar = psi.particle().omega(gd.pbar);
    // bbar^2 (sigma_p/|pbar|)^2 = (sigma_p/omega(pbar))^2, finite at pbar = 0.
    const double bound = (gd.sigma_p / om_bar) * (gd.sigma_p / om_bar);
    if (bound >= 0.1)
        throw std::domain_error(
            "average_event: packet too wide, fractional-remainder bound " +
            std::to_string(bound) + " >= 0.1");

    const ParticleSpec pt = psi.particle();
    const MomentumField f = MomentumField::from_amplitude(psi);
    const auto expect = [&](const MomentumField& of) { return std::real(f.dot(of)); };
    const auto mul = [&](const std::function<double(const Vec3&)>& fn) {
        return f.multiplied(fn, nullptr);
    };

    Vec3 x_exp, beta_exp;
    for (int i = 0; i < 3; ++i) {
        x_exp(i) = expect(f.xhat(i));
        beta_exp(i) = expect(mul([&, i](const Vec3& p) { return p(i) / pt.omega(p); }));
    }
    const Vec3 xt = x_exp + beta_exp * t;
    const FourVector x4(t, xt);

    const Vec3 b0 = beta0.beta();
    const double g0 = beta0.gamma();
    const double tp = g0 * (t + b0.dot(xt));

    const std::array<MomentumField, 3> xp = boosted_position_operator_apply(psi, beta0);
    Vec3 xp_exp, betap_exp;
    for (int i = 0; i < 3; ++i) {
        xp_exp(i) = expect(xp[i]);
        betap_exp(i) = expect(mul([&, i](const Vec3& p) {
            const Vec3 b = p / pt.omega(p);
            const Vec3 bpar = b0.squaredNorm() > 0.0
                                  ? Vec3(b.dot(b0) / b0.squaredNorm() * b0)
                                  : Vec3(Vec3::Zero());
            const Vec3 bperp = b - bpar;
            return (bperp(i) + g0 * (bpar(i) + b0(i))) / (g0 * (1.0 + b0.dot(b)));
        }));
    }
    const FourVector x4p(tp, xp_exp + betap_exp * tp);

    const FourVector lx = beta0.speed() > 0.0 ? pure_boost(beta0).apply(x4) : x4;
    AverageEventResult out;
    out.x4 = x4;
    out.x4_primed = x4p;
    out.epsilon_bound = bound;
    out.deviation = (x4p - lx).as_vec4().norm() / lx.as_vec4().norm();
    return out;
}

PositionAmplitude position_transforms(const PositionAmplitude& psix,
                                      const PoincareElement& g) {
    return PositionAmplitude(apply(psix.momentum(), g), psix.t());
}

double kg_residual(const PositionAmplitude& psix) {
    const MomentumAmplitude psi = to_momentum(psix);
    const GridCarrier& g = psi.grid();
    const double m2 = psi.particle().m0 * psi.particle().m0;
    double num = 0.0, den = 0.0;
    const int n = g.spec.n;
    for (const GridData& c : g.comps)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Vec3 p = g.spec.point(i, j, k);
                    const double w = psi.particle().omega(p);
                    const double mode = std::norm(c(g.spec.index(i, j, k)));
                    const double op = p.squaredNorm() + m2 - w * w;  // -d_t^2 -> w^2
                    num += op * op * mode;
                    den += (w * w) * (w * w) * mode;
                }
    return std::sqrt(num / den);
}

}  // namespace rqk

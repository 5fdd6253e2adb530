#include "rqk/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace rqk {

GaussHermiteRule::GaussHermiteRule(int n) {
    if (n < 1) throw std::domain_error("GaussHermiteRule: n must be >= 1");
    // Golub-Welsch on the Hermite Jacobi matrix (off-diagonal sqrt(k/2)).
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::sqrt(M_PI);  // integral of the weight e^{-x^2}
    nodes.resize(n);
    wexp.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        nodes[i] = x;
        wexp[i] = mu0 * v0 * v0 * std::exp(x * x);
    }
}

const GaussHermiteRule& gauss_hermite(int n) {
    static std::map<int, GaussHermiteRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussHermiteRule(n)).first;
    return it->second;
}

cplx gh_integrate3(const std::function<cplx(const Vec3&)>& f, const Vec3& center,
                   const Mat3& cov, int n) {
    const GaussHermiteRule& rule = gauss_hermite(n);
    Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    Vec3 scale;
    for (int i = 0; i < 3; ++i) scale(i) = std::sqrt(std::max(2.0 * es.eigenvalues()(i), 1e-300));
    const Mat3 axes = es.eigenvectors();

    cplx total = 0.0;
    const double jac = scale(0) * scale(1) * scale(2);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx row = 0.0;
            for (int k = 0; k < n; ++k) {
                const Vec3 u(rule.nodes[i] * scale(0), rule.nodes[j] * scale(1),
                             rule.nodes[k] * scale(2));
                row += rule.wexp[k] * f(center + axes * u);
            }
            total += rule.wexp[i] * rule.wexp[j] * row;
        }
    }
    return total * jac;
}

double gk_integrate(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, int max_depth, double abs_floor) {
    double err = 0.0;
    const double result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel_tol, &err);
    if (err > rel_tol * std::max(std::abs(result), 1e-300) * 100.0 && err > abs_floor) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "gk_integrate: quadrature did not converge (estimate %.6e, error %.6e)",
                      result, err);
        throw std::runtime_error(msg);
    }
    return result;
}

}  // namespace rqk

#ifndef RQK_QUADRATURE_HPP
#define RQK_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "rqk/kinematics.hpp"

namespace rqk {

/// Gauss-Hermite rule: nodes x_i and weight-free factors w_i e^{x_i^2}, so
/// that integral f(x) dx ~= sum_i wexp_i f(x_i) for f with Gaussian decay.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> wexp;

    explicit GaussHermiteRule(int n);
};

/// Cached rule lookup (rules are cheap but reused heavily).
const GaussHermiteRule& gauss_hermite(int n);

/// Tensor-product Gauss-Hermite integral of f over R^3, with nodes placed
/// along the eigen-axes of `cov` around `center`. Converges spectrally for
/// Gaussian-dominated integrands whose support matches (center, cov).
cplx gh_integrate3(const std::function<cplx(const Vec3&)>& f, const Vec3& center,
                   const Mat3& cov, int n_per_axis);

/// Adaptive 1-D Gauss-Kronrod (15-point) integral on [a, b].
/// Throws std::runtime_error with the achieved estimate in the message if the
/// error estimate reaches neither rel_tol * |result| nor abs_floor (the
/// latter matters for strongly cancelling integrands with tiny results).
double gk_integrate(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, int max_depth = 15,
                    double abs_floor = 1e-14);

}  // namespace rqk

#endif

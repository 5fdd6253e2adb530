#include "rqk/spin.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rqk {

namespace {
using namespace std::complex_literals;

const Eigen::Matrix2cd kSigmaX = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
const Eigen::Matrix2cd kSigmaY = (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished();
const Eigen::Matrix2cd kSigmaZ = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();

double factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    if (n < 0 || n > 170) throw std::domain_error("factorial out of range");
    return table[n];
}
}  // namespace

SU2Matrix su2_from_rotation(const RotationMatrix& R) {
    const Mat3& r = R.entries();
    const double ctheta = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
    const double theta = std::acos(ctheta);

    Vec3 n(0, 0, 1);
    const double stheta = std::sin(theta);
    if (stheta > 1e-7) {
        n = Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)) / (2.0 * stheta);
        n.normalize();
    } else if (ctheta < 0.0) {
        // Angle at or near pi: antisymmetric part vanishes; recover the axis
        // from (R + I)/2 = n n^T and fix the sign lexicographically.
        int imax = 0;
        for (int i = 1; i < 3; ++i)
            if (r(i, i) > r(imax, imax)) imax = i;
        n(imax) = std::sqrt(std::max(0.0, (r(imax, imax) + 1.0) / 2.0));
        for (int i = 0; i < 3; ++i)
            if (i != imax) n(i) = (r(i, imax) + r(imax, i)) / (4.0 * n(imax));
        n.normalize();
        for (int i = 0; i < 3; ++i) {
            if (std::abs(n(i)) < 1e-12) continue;
            if (n(i) < 0.0) n = -n;
            break;
        }
    }
    const Eigen::Matrix2cd nsigma = n.x() * kSigmaX + n.y() * kSigmaY + n.z() * kSigmaZ;
    return std::cos(theta / 2.0) * Eigen::Matrix2cd::Identity() -
           1i * std::sin(theta / 2.0) * nsigma;
}

RotationMatrix rotation_from_su2(const SU2Matrix& U) {
    const Eigen::Matrix2cd sig[3] = {kSigmaX, kSigmaY, kSigmaZ};
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = 0.5 * (sig[i] * U * sig[j] * U.adjoint()).trace().real();
    return RotationMatrix(r, 1e-10);
}

WignerDMatrix wigner_little_d(SpinValue s, double beta) {
    const int ts = s.two_s;
    const double c = std::cos(beta / 2.0), sn = std::sin(beta / 2.0);
    WignerDMatrix d(s.dim(), s.dim());
    for (int ip = 0; ip < s.dim(); ++ip) {      // row, m' = s - ip
        for (int i = 0; i < s.dim(); ++i) {     // col, m  = s - i
            const int jm = ts - i, jmm = i;     // j+m, j-m
            const int jmp = ts - ip, jmmp = ip; // j+m', j-m'
            const int mpmm = i - ip;            // m' - m
            double sum = 0.0;
            const int kmin = std::max(0, -mpmm);
            const int kmax = std::min(jm, jmmp);
            for (int k = kmin; k <= kmax; ++k) {
                const double num = std::sqrt(factorial(jm) * factorial(jmm) *
                                             factorial(jmp) * factorial(jmmp));
                const double den = factorial(jm - k) * factorial(k) *
                                   factorial(jmmp - k) * factorial(mpmm + k);
                const double sign = (mpmm + k) % 2 == 0 ? 1.0 : -1.0;
                sum += sign * num / den * std::pow(c, jm + jmmp - 2 * k) *
                       std::pow(sn, mpmm + 2 * k);
            }
            d(ip, i) = sum;
        }
    }
    return d;
}

WignerDMatrix wigner_d(SpinValue s, const SU2Matrix& U) {
    const double udet = std::abs(U.determinant() - 1.0);
    const double udev = (U * U.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (udet > 1e-10 || udev > 1e-10)
        throw std::invalid_argument("wigner_d: input is not in SU(2)");

    // ZYZ Euler extraction: U00 = cos(b/2) e^{-i(a+g)/2}, U10 = sin(b/2) e^{i(a-g)/2}.
    const double cb = std::abs(U(0, 0)), sb = std::abs(U(1, 0));
    const double beta = 2.0 * std::atan2(sb, cb);
    const double phi_plus = cb > 1e-300 ? -std::arg(U(0, 0)) : 0.0;   // (a+g)/2
    const double phi_minus = sb > 1e-300 ? std::arg(U(1, 0)) : 0.0;   // (a-g)/2

    WignerDMatrix d = wigner_little_d(s, beta);
    WignerDMatrix D(s.dim(), s.dim());
    for (int ip = 0; ip < s.dim(); ++ip) {
        for (int i = 0; i < s.dim(); ++i) {
            // m'*a + m*g = (m'+m) phi_plus + (m'-m) phi_minus; both integer
            // multiples, so the half-angle branch cancels and D is a
            // single-valued function of the SU(2) entries.
            const int mp_plus_m = s.two_s - ip - i;
            const int mp_minus_m = i - ip;
            D(ip, i) = std::exp(-1i * (mp_plus_m * phi_plus + mp_minus_m * phi_minus)) *
                       d(ip, i);
        }
    }
    return D;
}

}  // namespace rqk

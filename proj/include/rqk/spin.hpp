#ifndef RQK_SPIN_HPP
#define RQK_SPIN_HPP

#include "rqk/kinematics.hpp"

// SU(2) lifts of rotations and Wigner D-matrices D^(s) for integer and
// half-integer spin. Basis ordering m = +s, +s-1, ..., -s (Condon-Shortley
// phase convention).

namespace rqk {

/// Spin s stored as the integer 2s.
struct SpinValue {
    int two_s = 0;

    static SpinValue of_two_s(int t) {
        if (t < 0) throw std::domain_error("SpinValue: 2s must be >= 0");
        return SpinValue{t};
    }
    int dim() const { return two_s + 1; }
    double s() const { return 0.5 * two_s; }
    /// m value of row/column index i (i = 0 is m = +s).
    double m_of(int i) const { return 0.5 * two_s - i; }
    /// (-1)^(s+m) for the time-reversal phase; s+m is always an integer.
    int phase_s_plus_m(int i) const { return (two_s - i) % 2 == 0 ? 1 : -1; }
};

using SU2Matrix = Eigen::Matrix2cd;
using WignerDMatrix = Eigen::MatrixXcd;

/// Lift R in SO(3) to SU(2) with rotation angle in [0, pi]. At angle pi the
/// axis sign is fixed by making its first nonzero component positive.
SU2Matrix su2_from_rotation(const RotationMatrix& R);

/// Map an SU(2) element back to the rotation it covers (adjoint action).
RotationMatrix rotation_from_su2(const SU2Matrix& U);

/// (2s+1)x(2s+1) unitary representation matrix D^(s)(U). Single-valued as a
/// function of the SU(2) element, so D(U1 U2) = D(U1) D(U2) exactly; the
/// half-integer sign ambiguity lives entirely in su2_from_rotation.
WignerDMatrix wigner_d(SpinValue s, const SU2Matrix& U);

/// Reduced rotation matrix d^(s)(beta) about y (real entries).
WignerDMatrix wigner_little_d(SpinValue s, double beta);

}  // namespace rqk

#endif

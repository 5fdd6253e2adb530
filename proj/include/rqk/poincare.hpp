#ifndef RQK_POINCARE_HPP
#define RQK_POINCARE_HPP

#include <variant>

#include "rqk/kinematics.hpp"

// Transformations of momentum/spin amplitudes: spacetime translations,
// rotations, boosts (Jacobian factor + Wigner rotation), space inversion and
// time reversal.
//
// Amplitude rules (active convention):
//   translation:   Psi'_m(p) = Psi_m(p) e^{+i p.a}
//   rotation:      Psi'_m(p) = sum_m' D^(s)_{mm'}(R) Psi_m'(R^-1 p)
//   boost:         Psi'_m(p) = sqrt(w(q)/w(p)) sum_m' D^(s)_{mm'}(W(p<-q)) Psi_m'(q),
//                  q = spatial part of Lambda^-1 p
//   parity:        Psi'_m(p) = eta Psi_m(-p)
//   time reversal: Psi'_m(p) = (-)^(s+m) Psi*_{-m}(-p)
// The time-reversal phase is the amplitude rule; the basis-vector rule
// carries (-)^(s-m) instead, differing by (-1)^(2m).

namespace rqk {

class MomentumAmplitude;

struct Translation {
    FourVector a;
};
struct Rotation {
    RotationMatrix R;
};
struct Boost {
    Velocity3 beta0;
};
struct Parity {};
struct TimeReversal {};

using PoincareElement = std::variant<Translation, Rotation, Boost, Parity, TimeReversal>;

MomentumAmplitude translate(const MomentumAmplitude& psi, const FourVector& a);
MomentumAmplitude rotate(const MomentumAmplitude& psi, const RotationMatrix& R);
MomentumAmplitude boost(const MomentumAmplitude& psi, const Velocity3& beta0);
MomentumAmplitude parity(const MomentumAmplitude& psi);
MomentumAmplitude time_reverse(const MomentumAmplitude& psi);

MomentumAmplitude apply(const MomentumAmplitude& psi, const PoincareElement& g);

}  // namespace rqk

#endif

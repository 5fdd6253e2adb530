#ifndef RQK_FOURIER_HPP
#define RQK_FOURIER_HPP

#include "rqk/grid.hpp"

namespace rqk {

/// Unitary Fourier transform between momentum and position samples with
/// symmetric (2 pi)^{-3/2} factors:
///   f(x) = (2 pi)^{-3/2} integral d3p F(p) e^{+i p.x}
///   F(p) = (2 pi)^{-3/2} integral d3x f(x) e^{-i p.x}
/// Both grids are cell-centered cubes; the position grid is the dual of the
/// momentum grid (dx dp = 2 pi / n), so the round trip is exact to rounding.
class FourierEngine {
  public:
    explicit FourierEngine(const GridSpec& momentum_spec);

    const GridSpec& momentum_spec() const { return pspec_; }
    const GridSpec& position_spec() const { return xspec_; }

    /// Momentum samples -> position samples (kernel e^{+i p.x}).
    GridData to_position(const GridData& pdata) const;
    /// Position samples -> momentum samples (kernel e^{-i p.x}).
    GridData to_momentum(const GridData& xdata) const;

    /// Spectral partial derivative d/dp along `axis` of momentum samples
    /// (round trip through position space, multiplying by -i x).
    GridData momentum_derivative(const GridData& pdata, int axis) const;

  private:
    GridData transform(const GridData& in, bool to_x) const;
    GridSpec pspec_;
    GridSpec xspec_;
};

}  // namespace rqk

#endif

#ifndef RQK_GRID_HPP
#define RQK_GRID_HPP

#include <cstdint>
#include <vector>

#include "rqk/kinematics.hpp"

namespace rqk {

/// Uniform cell-centered Cartesian cube, n^3 samples at
/// coord(j) = -pmax + (j + 1/2) * (2 pmax / n). Cell centering makes the
/// reflection p -> -p an exact index map (j -> n-1-j).
struct GridSpec {
    int n = 64;
    double pmax = 1.0;

    double step() const { return 2.0 * pmax / n; }
    double coord(int j) const { return -pmax + (j + 0.5) * step(); }
    std::size_t size() const { return std::size_t(n) * n * n; }
    std::size_t index(int i, int j, int k) const {
        return (std::size_t(i) * n + j) * n + k;
    }
    Vec3 point(int i, int j, int k) const { return Vec3(coord(i), coord(j), coord(k)); }
    double cell_volume() const { return step() * step() * step(); }
    bool operator==(const GridSpec& o) const { return n == o.n && pmax == o.pmax; }
};

using GridData = Eigen::VectorXcd;  // n^3 samples, row-major (i, j, k)

/// Separable 6-point Lagrange interpolation at an off-grid point. Points
/// outside the box clamp to zero.
cplx interpolate6(const GridSpec& spec, const GridData& data, const Vec3& p);

/// Spectral (zero-padded FFT) upsampling by an integer factor; exact for
/// band-limited periodic data, and the Gaussian-class data used here decays
/// to ~1e-14 at the box edge.
GridData spectral_upsample(const GridSpec& spec, const GridData& data, int factor,
                           GridSpec* fine_spec);

/// sum |data|^2 * cell volume.
double grid_norm_squared(const GridSpec& spec, const std::vector<GridData>& comps);

/// Fraction of the total mass in the outermost cell shell (aliasing guard).
double boundary_shell_mass(const GridSpec& spec, const std::vector<GridData>& comps);

}  // namespace rqk

#endif

#include "rqk/fourier.hpp"

#include <fftw3.h>

#include <cmath>

namespace rqk {

namespace {
using namespace std::complex_literals;

// Cell-centered grids turn the continuum kernel into a plain DFT with
// per-axis phase vectors: with p_j = -pmax + (j+1/2) dp, x_k = -xmax + (k+1/2) dx
// and dp dx = 2 pi / n,
//   e^{+i p_j x_k} = C e^{i pi j (1/n - 1)} e^{i pi k (1/n - 1)} e^{+2 pi i j k / n},
//   C = e^{i pi (n/2 - 1 + 1/(2n))}.
std::vector<cplx> axis_phase(int n) {
    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j) v[j] = std::exp(1i * (M_PI * j * (1.0 / n - 1.0)));
    return v;
}

void scale_axes(GridData& d, int n, const std::vector<cplx>& ph) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx pij = ph[i] * ph[j];
            const std::size_t off = (std::size_t(i) * n + j) * n;
            for (int k = 0; k < n; ++k) d(off + k) *= pij * ph[k];
        }
}
}  // namespace

FourierEngine::FourierEngine(const GridSpec& momentum_spec) : pspec_(momentum_spec) {
    xspec_.n = pspec_.n;
    xspec_.pmax = pspec_.n * M_PI / (2.0 * pspec_.pmax);  // dual box half-width
}

GridData FourierEngine::transform(const GridData& in, bool to_x) const {
    const int n = pspec_.n;
    GridData out = in;
    std::vector<cplx> ph = axis_phase(n);
    if (!to_x)
        for (cplx& c : ph) c = std::conj(c);
    scale_axes(out, n, ph);
    fftw_plan plan = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(out.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      to_x ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    scale_axes(out, n, ph);
    cplx c3 = std::exp(1i * (3.0 * M_PI * (0.5 * n - 1.0 + 0.5 / n)));
    if (!to_x) c3 = std::conj(c3);
    const double vol = to_x ? pspec_.cell_volume() : xspec_.cell_volume();
    out *= c3 * std::pow(2.0 * M_PI, -1.5) * vol;
    return out;
}

GridData FourierEngine::to_position(const GridData& pdata) const {
    return transform(pdata, true);
}

GridData FourierEngine::to_momentum(const GridData& xdata) const {
    return transform(xdata, false);
}

GridData FourierEngine::momentum_derivative(const GridData& pdata, int axis) const {
    GridData f = to_position(pdata);
    const int n = xspec_.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int idx[3] = {i, j, k};
                f(xspec_.index(i, j, k)) *= -1i * xspec_.coord(idx[axis]);
            }
    return to_momentum(f);
}

}  // namespace rqk

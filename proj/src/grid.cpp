#include "rqk/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace rqk {

namespace {
using namespace std::complex_literals;

// 6-point Lagrange weights for a query at fractional position t relative to
// stencil node `lo`, nodes at lo..lo+5 (integer coordinates).
void lagrange6_weights(double t, double w[6]) {
    for (int a = 0; a < 6; ++a) {
        double acc = 1.0;
        for (int b = 0; b < 6; ++b) {
            if (a == b) continue;
            acc *= (t - b) / double(a - b);
        }
        w[a] = acc;
    }
}
}  // namespace

cplx interpolate6(const GridSpec& spec, const GridData& data, const Vec3& p) {
    int lo[3];
    double w[3][6];
    for (int a = 0; a < 3; ++a) {
        if (std::abs(p(a)) > spec.pmax) return 0.0;  // clamp outside box to 0
        const double u = (p(a) + spec.pmax) / spec.step() - 0.5;  // grid coordinate
        int base = int(std::floor(u)) - 2;
        base = std::max(0, std::min(spec.n - 6, base));
        lo[a] = base;
        lagrange6_weights(u - base, w[a]);
    }
    cplx total = 0.0;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            cplx row = 0.0;
            const std::size_t off = spec.index(lo[0] + i, lo[1] + j, lo[2]);
            for (int k = 0; k < 6; ++k) row += w[2][k] * data(off + k);
            total += w[0][i] * w[1][j] * row;
        }
    }
    return total;
}

GridData spectral_upsample(const GridSpec& spec, const GridData& data, int factor,
                           GridSpec* fine_spec_out) {
    if (factor < 1) throw std::domain_error("spectral_upsample: factor must be >= 1");
    const int n = spec.n;
    const int fn = n * factor;
    const GridSpec fine{fn, spec.pmax};
    if (fine_spec_out) *fine_spec_out = fine;
    if (factor == 1) return data;

    // Forward transform of the coarse samples.
    std::vector<cplx> spec_c(data.data(), data.data() + spec.size());
    fftw_plan pf = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(spec_c.data()),
                                    reinterpret_cast<fftw_complex*>(spec_c.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(pf);
    fftw_destroy_plan(pf);

    // Samples sit at cell centers: f_j = sum_k c_k e^{2 pi i k (j+1/2)/n}, so
    // the Fourier coefficients pick up half-sample phases on both grids.
    // Nyquist bins are split evenly between +-n/2.
    struct Slot {
        int src, dst;
        cplx phase;  // combined coarse/fine half-sample phase and Nyquist weight
    };
    std::vector<Slot> slots;
    for (int k = 0; k < n; ++k) {
        const int ks = k <= n / 2 ? k : k - n;  // signed frequency
        auto add = [&](int freq, double weight) {
            const cplx ph = weight *
                            std::exp(-1i * (M_PI * double(freq) / n)) *
                            std::exp(+1i * (M_PI * double(freq) / fn));
            slots.push_back({k, (freq % fn + fn) % fn, ph});
        };
        if (k == n / 2) {
            add(n / 2, 0.5);
            add(-n / 2, 0.5);
        } else {
            add(ks, 1.0);
        }
    }

    GridData fine_data = GridData::Zero(fine.size());
    for (const Slot& a : slots)
        for (const Slot& b : slots)
            for (const Slot& c : slots) {
                const cplx v = spec_c[(std::size_t(a.src) * n + b.src) * n + c.src] *
                               a.phase * b.phase * c.phase;
                fine_data((std::size_t(a.dst) * fn + b.dst) * fn + c.dst) = v;
            }

    fftw_plan pb = fftw_plan_dft_3d(fn, fn, fn,
                                    reinterpret_cast<fftw_complex*>(fine_data.data()),
                                    reinterpret_cast<fftw_complex*>(fine_data.data()),
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(pb);
    fftw_destroy_plan(pb);
    fine_data /= double(spec.size());
    return fine_data;
}

double grid_norm_squared(const GridSpec& spec, const std::vector<GridData>& comps) {
    double total = 0.0;
    for (const GridData& c : comps) total += c.squaredNorm();
    return total * spec.cell_volume();
}

double boundary_shell_mass(const GridSpec& spec, const std::vector<GridData>& comps) {
    double shell = 0.0, total = 0.0;
    const int n = spec.n;
    for (const GridData& c : comps) {
        total += c.squaredNorm();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    if (i > 0 && i < n - 1 && j > 0 && j < n - 1 && k > 0 && k < n - 1)
                        continue;
                    shell += std::norm(c(spec.index(i, j, k)));
                }
    }
    return total > 0.0 ? shell / total : 0.0;
}

}  // namespace rqk

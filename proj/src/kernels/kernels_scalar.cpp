#include "qsd/kernels.hpp"

// Reference kernels. Plain double arithmetic, no std::complex, so the
// instruction-level evaluation order is exactly what the source spells out.

namespace qsd::kernels {

namespace {

void fold4_scalar(double* out, const double* in, const double* tab, std::size_t n) {
    const double t0r = tab[0], t0i = tab[1];
    const double t1r = tab[2], t1i = tab[3];
    const double t2r = tab[4], t2i = tab[5];
    const double t3r = tab[6], t3i = tab[7];
    for (std::size_t i = 0; i < n; ++i) {
        const double* g = in + 8 * i;
        const double p0r = t0r * g[0] - t0i * g[1], p0i = t0r * g[1] + t0i * g[0];
        const double p1r = t1r * g[2] - t1i * g[3], p1i = t1r * g[3] + t1i * g[2];
        const double p2r = t2r * g[4] - t2i * g[5], p2i = t2r * g[5] + t2i * g[4];
        const double p3r = t3r * g[6] - t3i * g[7], p3i = t3r * g[7] + t3i * g[6];
        out[2 * i] = (p0r + p2r) + (p1r + p3r);
        out[2 * i + 1] = (p0i + p2i) + (p1i + p3i);
    }
}

void had_scale_scalar(double* out, const double* w, const double* x, double s_re, double s_im,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double wr = w[2 * i], wi = w[2 * i + 1];
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double tr = wr * xr - wi * xi;
        const double ti = wr * xi + wi * xr;
        out[2 * i] = tr * s_re - ti * s_im;
        out[2 * i + 1] = tr * s_im + ti * s_re;
    }
}

}  // namespace

const ops scalar_ops = {"scalar", fold4_scalar, had_scale_scalar};

}  // namespace qsd::kernels

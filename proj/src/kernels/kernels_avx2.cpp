#include "qsd/kernels.hpp"

#ifdef QSD_HAVE_AVX2_TU

#include <immintrin.h>

namespace qsd::kernels {

namespace {

// (a0*b0, a1*b1) for two interleaved complex doubles per register, expanded
// in the same order as the scalar reference.
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d are = _mm256_movedup_pd(a);          // (ar, ar, ...)
    const __m256d aim = _mm256_unpackhi_pd(a, a);      // (ai, ai, ...)
    const __m256d bsw = _mm256_shuffle_pd(b, b, 0x5);  // (bi, br, ...)
    return _mm256_addsub_pd(_mm256_mul_pd(are, b), _mm256_mul_pd(aim, bsw));
}

void fold4_avx2(double* out, const double* in, const double* tab, std::size_t n) {
    const __m256d tab01 = _mm256_loadu_pd(tab);
    const __m256d tab23 = _mm256_loadu_pd(tab + 4);
    for (std::size_t i = 0; i < n; ++i) {
        const double* g = in + 8 * i;
        const __m256d p01 = cmul(tab01, _mm256_loadu_pd(g));
        const __m256d p23 = cmul(tab23, _mm256_loadu_pd(g + 4));
        const __m256d q = _mm256_add_pd(p01, p23);  // (t0+t2, t1+t3)
        const __m128d t = _mm_add_pd(_mm256_castpd256_pd128(q), _mm256_extractf128_pd(q, 1));
        _mm_storeu_pd(out + 2 * i, t);
    }
}

void had_scale_avx2(double* out, const double* w, const double* x, double s_re, double s_im,
                    std::size_t n) {
    const __m256d s = _mm256_setr_pd(s_re, s_im, s_re, s_im);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d t = cmul(_mm256_loadu_pd(w + 2 * i), _mm256_loadu_pd(x + 2 * i));
        _mm256_storeu_pd(out + 2 * i, cmul(t, s));
    }
    if (i < n) {
        const double wr = w[2 * i], wi = w[2 * i + 1];
        const double xr = x[2 * i], xi = x[2 * i + 1];
        const double tr = wr * xr - wi * xi;
        const double ti = wr * xi + wi * xr;
        out[2 * i] = tr * s_re - ti * s_im;
        out[2 * i + 1] = tr * s_im + ti * s_re;
    }
}

}  // namespace

const ops avx2_ops = {"avx2", fold4_avx2, had_scale_avx2};

}  // namespace qsd::kernels

#endif  // QSD_HAVE_AVX2_TU

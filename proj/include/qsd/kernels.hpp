#pragma once

// Inner-loop kernels of the tensor propagation, in scalar and AVX2 builds
// selected at runtime. Arrays are interleaved complex doubles (re, im, ...).
//
// Both variants commit to one evaluation order so their results match bit for
// bit: complex products expand as (ar*br - ai*bi, ar*bi + ai*br), and fold4
// accumulates as (t0 + t2) + (t1 + t3). The kernel translation units compile
// with contraction disabled so no FMA sneaks into one variant only.

#include <cstddef>
#include <string_view>

namespace qsd::kernels {

// out[i] = tab[0] in[4i] + tab[1] in[4i+1] + tab[2] in[4i+2] + tab[3] in[4i+3]
// for i in [0, n): contracts the fastest tensor digit against a 4-entry table.
using fold4_fn = void (*)(double* out, const double* in, const double* tab, std::size_t n);

// out[i] = w[i] * x[i] * s for i in [0, n); out may alias x.
using had_scale_fn = void (*)(double* out, const double* w, const double* x, double s_re,
                              double s_im, std::size_t n);

struct ops {
    const char* name;
    fold4_fn fold4;
    had_scale_fn had_scale;
};

enum class variant { auto_pick, scalar, avx2 };

extern const ops scalar_ops;
#ifdef QSD_HAVE_AVX2_TU
extern const ops avx2_ops;
#endif

bool avx2_available();

// Resolve a variant to concrete ops; auto picks AVX2 when the CPU has it.
// Requesting avx2 on a machine without it is a configuration error.
const ops& select(variant v);

// "auto" | "scalar" | "avx2"
variant parse_variant(std::string_view name);

// Variant from the QSD_KERNEL environment variable, auto when unset.
variant env_variant();

}  // namespace qsd::kernels

#include "qsd/kernels.hpp"

#include <cstdlib>
#include <string>

#include "qsd/errors.hpp"

namespace qsd::kernels {

bool avx2_available() {
#ifdef QSD_HAVE_AVX2_TU
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const ops& select(variant v) {
#ifdef QSD_HAVE_AVX2_TU
    if (v == variant::avx2) {
        if (!avx2_available())
            throw config_error(config_errc::bad_value, "avx2 kernels requested but the CPU lacks AVX2");
        return avx2_ops;
    }
    if (v == variant::auto_pick && avx2_available()) return avx2_ops;
#else
    if (v == variant::avx2)
        throw config_error(config_errc::bad_value, "avx2 kernels are not part of this build");
#endif
    return scalar_ops;
}

variant parse_variant(std::string_view name) {
    if (name == "auto") return variant::auto_pick;
    if (name == "scalar") return variant::scalar;
    if (name == "avx2") return variant::avx2;
    throw config_error(config_errc::bad_value,
                       "unknown kernel variant \"" + std::string(name) + "\" (auto, scalar, avx2)");
}

variant env_variant() {
    const char* env = std::getenv("QSD_KERNEL");
    return env ? parse_variant(env) : variant::auto_pick;
}

}  // namespace qsd::kernels

#include <cstdlib>
#include <cstring>

#include "maba/simd.hpp"

namespace maba::simd {

namespace {

const Ops& select() {
    if (const char* env = std::getenv("MABA_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_ops();
        if (std::strcmp(env, "avx2") == 0) return avx2_ops();
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return avx2_ops();
#endif
    return scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops& chosen = select();
    return chosen;
}

}  // namespace maba::simd

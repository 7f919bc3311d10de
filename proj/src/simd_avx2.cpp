// AVX2 variants of the complex-array primitives. Compiled with -mavx2 -mfma;
// only dispatched to when the CPU reports both features.

#include "maba/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace maba::simd {

namespace {

// One __m256d holds two complex doubles [re0 im0 re1 im1].
// For a scalar a and packed z: a*z = [ar*re - ai*im, ar*im + ai*re],
// computed as fmaddsub(ar, z, ai * swap(z)).
inline __m256d cmul_scalar(__m256d are, __m256d aim, __m256d z) {
    __m256d zsw = _mm256_permute_pd(z, 0x5);
    return _mm256_fmaddsub_pd(are, z, _mm256_mul_pd(aim, zsw));
}

void axpy_avx2(cx a, const cx* x, cx* y, std::size_t n) {
    const __m256d are = _mm256_set1_pd(a.real());
    const __m256d aim = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_scalar(are, aim, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(cx a, cx* x, std::size_t n) {
    const __m256d are = _mm256_set1_pd(a.real());
    const __m256d aim = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    auto* xd = reinterpret_cast<double*>(x);
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        _mm256_storeu_pd(xd + 2 * i, cmul_scalar(are, aim, xv));
    }
    for (; i < n; ++i) x[i] *= a;
}

void mix2_avx2(cx a, cx b, cx c, cx d, cx* x, cx* y, std::size_t n) {
    const __m256d are = _mm256_set1_pd(a.real()), aim = _mm256_set1_pd(a.imag());
    const __m256d bre = _mm256_set1_pd(b.real()), bim = _mm256_set1_pd(b.imag());
    const __m256d cre = _mm256_set1_pd(c.real()), cim = _mm256_set1_pd(c.imag());
    const __m256d dre = _mm256_set1_pd(d.real()), dim = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    auto* xd = reinterpret_cast<double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d nx = _mm256_add_pd(cmul_scalar(are, aim, xv), cmul_scalar(bre, bim, yv));
        __m256d ny = _mm256_add_pd(cmul_scalar(cre, cim, xv), cmul_scalar(dre, dim, yv));
        _mm256_storeu_pd(xd + 2 * i, nx);
        _mm256_storeu_pd(yd + 2 * i, ny);
    }
    for (; i < n; ++i) {
        cx xi = x[i], yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

cx dotu_avx2(const cx* x, const cx* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<const double*>(y);
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d yre = _mm256_movedup_pd(yv);           // [yr0 yr0 yr1 yr1]
        __m256d yim = _mm256_permute_pd(yv, 0xF);      // [yi0 yi0 yi1 yi1]
        __m256d xsw = _mm256_permute_pd(xv, 0x5);
        acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(yre, xv, _mm256_mul_pd(yim, xsw)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    cx result{lanes[0] + lanes[2], lanes[1] + lanes[3]};
    for (; i < n; ++i) result += x[i] * y[i];
    return result;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{"avx2", axpy_avx2, scale_avx2, mix2_avx2, dotu_avx2};
    return ops;
}

}  // namespace maba::simd

#else

namespace maba::simd {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace maba::simd

#endif

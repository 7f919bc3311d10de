#pragma once

#include <complex>
#include <cstddef>

namespace maba::simd {

using cx = std::complex<double>;

// Complex-array primitives used by the dense-operator inner loops.
// Each entry has a scalar reference implementation and an AVX2 variant;
// the active table is selected once at runtime from CPU features (override
// with MABA_SIMD=scalar|avx2). The two variants are equivalence-tested
// against each other on random data.
struct Ops {
    const char* name;
    // y[i] += a * x[i]
    void (*axpy)(cx a, const cx* x, cx* y, std::size_t n);
    // x[i] *= a
    void (*scale)(cx a, cx* x, std::size_t n);
    // (x[i], y[i]) <- (a*x[i] + b*y[i], c*x[i] + d*y[i]); the 2x2 row mix
    // applied when a vertex weight acts on a pair of operator rows.
    void (*mix2)(cx a, cx b, cx c, cx d, cx* x, cx* y, std::size_t n);
    // Bilinear dot product sum_i x[i]*y[i] (no conjugation).
    cx (*dotu)(const cx* x, const cx* y, std::size_t n);
};

const Ops& scalar_ops();
const Ops& avx2_ops();  // falls back to scalar_ops() when unsupported
const Ops& active();    // runtime-selected

}  // namespace maba::simd

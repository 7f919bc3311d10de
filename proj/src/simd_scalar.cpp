#include "maba/simd.hpp"

namespace maba::simd {

namespace {

void axpy_scalar(cx a, const cx* x, cx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(cx a, cx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void mix2_scalar(cx a, cx b, cx c, cx d, cx* x, cx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cx xi = x[i], yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

cx dotu_scalar(const cx* x, const cx* y, std::size_t n) {
    cx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", axpy_scalar, scale_scalar, mix2_scalar, dotu_scalar};
    return ops;
}

}  // namespace maba::simd

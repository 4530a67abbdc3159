#include "lceit/simd/kernels.hpp"

#include <algorithm>

namespace lceit::simd {
namespace {

// Split real/imaginary accumulation keeps the scalar path in the same
// association order as the vector path for each output element.
void gemm_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    std::fill(c, c + n * n, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const double ar = a[i * n + k].real();
            const double ai = a[i * n + k].imag();
            if (ar == 0.0 && ai == 0.0) continue;
            const cplx* brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double br = brow[j].real();
                const double bi = brow[j].imag();
                crow[j] += cplx{ar * br - ai * bi, ar * bi + ai * br};
            }
        }
    }
}

void axpy_scalar(std::size_t len, double alpha, const cplx* x, cplx* y) {
    for (std::size_t k = 0; k < len; ++k) y[k] += alpha * x[k];
}

void axpby_scalar(std::size_t len, const cplx* x, double alpha, const cplx* d, cplx* y) {
    for (std::size_t k = 0; k < len; ++k) y[k] = x[k] + alpha * d[k];
}

cplx dotu_scalar(std::size_t len, const cplx* x, const cplx* y) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        re += x[k].real() * y[k].real() - x[k].imag() * y[k].imag();
        im += x[k].real() * y[k].imag() + x[k].imag() * y[k].real();
    }
    return {re, im};
}

constexpr KernelTable kScalar{"scalar", gemm_scalar, axpy_scalar, axpby_scalar, dotu_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace lceit::simd

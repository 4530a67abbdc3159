#pragma once

// Dense complex kernels used by the master-equation integrator.
//
// Every kernel exists as a portable scalar reference and, on x86-64, as an
// AVX2+FMA variant. The variant is picked once at runtime from CPUID; the
// environment variable LCEIT_KERNELS=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace lceit::simd {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    // c = a * b for row-major n x n matrices. c must not alias a or b.
    void (*gemm)(std::size_t n, const cplx* a, const cplx* b, cplx* c);

    // y += alpha * x
    void (*axpy)(std::size_t len, double alpha, const cplx* x, cplx* y);

    // y = x + alpha * d
    void (*axpby)(std::size_t len, const cplx* x, double alpha, const cplx* d, cplx* y);

    // sum_k x[k] * y[k] (no conjugation)
    cplx (*dotu)(std::size_t len, const cplx* x, const cplx* y);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

// The table selected for this process.
const KernelTable& active_kernels() noexcept;

}  // namespace lceit::simd

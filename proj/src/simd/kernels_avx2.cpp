// Compiled with -mavx2 -mfma. Nothing in this file may run before the CPUID
// check in dispatch.cpp has confirmed both extensions.

#include "lceit/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace lceit::simd {
namespace {

// A __m256d holds two interleaved complex numbers [re0, im0, re1, im1].
// Products are accumulated as acc1 += re(a) * b and acc2 += im(a) * swap(b);
// addsub(acc1, acc2) then yields [re*re - im*im, re*im + im*re] per lane pair.

template <int W>
inline void gemm_row_block(std::size_t n, const double* arow, const double* b, const double* bsw,
                           std::size_t col_double, double* crow) {
    __m256d acc1[W];
    __m256d acc2[W];
    for (int v = 0; v < W; ++v) {
        acc1[v] = _mm256_setzero_pd();
        acc2[v] = _mm256_setzero_pd();
    }
    const std::size_t row_stride = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
        const __m256d are = _mm256_broadcast_sd(arow + 2 * k);
        const __m256d aim = _mm256_broadcast_sd(arow + 2 * k + 1);
        const double* brow = b + k * row_stride + col_double;
        const double* srow = bsw + k * row_stride + col_double;
        for (int v = 0; v < W; ++v) {
            acc1[v] = _mm256_fmadd_pd(are, _mm256_loadu_pd(brow + 4 * v), acc1[v]);
            acc2[v] = _mm256_fmadd_pd(aim, _mm256_loadu_pd(srow + 4 * v), acc2[v]);
        }
    }
    for (int v = 0; v < W; ++v) {
        _mm256_storeu_pd(crow + col_double + 4 * v, _mm256_addsub_pd(acc1[v], acc2[v]));
    }
}

void gemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    auto* cd = reinterpret_cast<double*>(c);

    thread_local std::vector<double> swapped;
    const std::size_t total = 2 * n * n;
    swapped.resize(total);
    for (std::size_t p = 0; p < total; p += 2) {
        swapped[p] = bd[p + 1];
        swapped[p + 1] = bd[p];
    }
    const double* sw = swapped.data();

    const std::size_t full_vectors = n / 2;
    const bool odd = (n % 2) != 0;

    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = ad + 2 * i * n;
        double* crow = cd + 2 * i * n;
        std::size_t vb = 0;
        while (vb < full_vectors) {
            const std::size_t w = std::min<std::size_t>(8, full_vectors - vb);
            const std::size_t col = 4 * vb;
            switch (w) {
                case 8: gemm_row_block<8>(n, arow, bd, sw, col, crow); break;
                case 7: gemm_row_block<7>(n, arow, bd, sw, col, crow); break;
                case 6: gemm_row_block<6>(n, arow, bd, sw, col, crow); break;
                case 5: gemm_row_block<5>(n, arow, bd, sw, col, crow); break;
                case 4: gemm_row_block<4>(n, arow, bd, sw, col, crow); break;
                case 3: gemm_row_block<3>(n, arow, bd, sw, col, crow); break;
                case 2: gemm_row_block<2>(n, arow, bd, sw, col, crow); break;
                default: gemm_row_block<1>(n, arow, bd, sw, col, crow); break;
            }
            vb += w;
        }
        if (odd) {
            const std::size_t col = 2 * (n - 1);
            __m128d acc1 = _mm_setzero_pd();
            __m128d acc2 = _mm_setzero_pd();
            for (std::size_t k = 0; k < n; ++k) {
                const __m128d are = _mm_set1_pd(arow[2 * k]);
                const __m128d aim = _mm_set1_pd(arow[2 * k + 1]);
                acc1 = _mm_fmadd_pd(are, _mm_loadu_pd(bd + 2 * k * n + col), acc1);
                acc2 = _mm_fmadd_pd(aim, _mm_loadu_pd(sw + 2 * k * n + col), acc2);
            }
            _mm_storeu_pd(crow + col, _mm_addsub_pd(acc1, acc2));
        }
    }
}

void axpy_avx2(std::size_t len, double alpha, const cplx* x, cplx* y) {
    const auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    const std::size_t total = 2 * len;
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t p = 0;
    for (; p + 4 <= total; p += 4) {
        _mm256_storeu_pd(yd + p, _mm256_fmadd_pd(va, _mm256_loadu_pd(xd + p), _mm256_loadu_pd(yd + p)));
    }
    for (; p < total; ++p) yd[p] = std::fma(alpha, xd[p], yd[p]);
}

void axpby_avx2(std::size_t len, const cplx* x, double alpha, const cplx* d, cplx* y) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* dd = reinterpret_cast<const double*>(d);
    auto* yd = reinterpret_cast<double*>(y);
    const std::size_t total = 2 * len;
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t p = 0;
    for (; p + 4 <= total; p += 4) {
        _mm256_storeu_pd(yd + p, _mm256_fmadd_pd(va, _mm256_loadu_pd(dd + p), _mm256_loadu_pd(xd + p)));
    }
    for (; p < total; ++p) yd[p] = std::fma(alpha, dd[p], xd[p]);
}

cplx dotu_avx2(std::size_t len, const cplx* x, const cplx* y) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    __m256d acc1 = _mm256_setzero_pd();  // [xr*yr, xi*yi, ...]
    __m256d acc2 = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
    std::size_t k = 0;
    for (; k + 2 <= len; k += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * k);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * k);
        acc1 = _mm256_fmadd_pd(xv, yv, acc1);
        acc2 = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc2);
    }
    alignas(32) double a1[4];
    alignas(32) double a2[4];
    _mm256_store_pd(a1, acc1);
    _mm256_store_pd(a2, acc2);
    double re = (a1[0] + a1[2]) - (a1[1] + a1[3]);
    double im = (a2[0] + a2[2]) + (a2[1] + a2[3]);
    for (; k < len; ++k) {
        re += x[k].real() * y[k].real() - x[k].imag() * y[k].imag();
        im += x[k].real() * y[k].imag() + x[k].imag() * y[k].real();
    }
    return {re, im};
}

constexpr KernelTable kAvx2{"avx2", gemm_avx2, axpy_avx2, axpby_avx2, dotu_avx2};

}  // namespace

const KernelTable& avx2_kernel_table() noexcept { return kAvx2; }

}  // namespace lceit::simd

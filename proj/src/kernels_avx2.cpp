// AVX2/FMA variants of the dot kernels. This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatch in kernels.cpp, never directly.

#include "lara/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace lara::kernels {

namespace {

inline float horizontal_sum(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_hadd_ps(lo, lo);
    lo = _mm_hadd_ps(lo, lo);
    return _mm_cvtss_f32(lo);
}

}  // namespace

float dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        acc = _mm256_fmadd_ps(va, vb, acc);
    }
    float sum = horizontal_sum(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void dot_batch_avx2(const float* query, const float* base, std::size_t rows,
                    std::size_t dim, float* scores) {
    for (std::size_t r = 0; r < rows; ++r) {
        scores[r] = dot_avx2(query, base + r * dim, dim);
    }
}

}  // namespace lara::kernels

#endif  // x86-64

#include "lara/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "lara/error.hpp"

namespace lara::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

namespace {

Backend detect_backend() {
    if (const char* env = std::getenv("LARA_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_supported()) {
                throw Error("LARA_KERNELS=avx2 but the CPU lacks AVX2/FMA");
            }
            return Backend::Avx2;
        }
        // anything else, including "auto", falls through to detection
    }
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{detect_backend()};
    return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported()) {
        throw Error("cannot force avx2 backend: unsupported CPU");
    }
    backend_slot().store(b, std::memory_order_relaxed);
}

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void dot_batch_scalar(const float* query, const float* base, std::size_t rows,
                      std::size_t dim, float* scores) {
    for (std::size_t r = 0; r < rows; ++r) {
        scores[r] = dot_scalar(query, base + r * dim, dim);
    }
}

float dot(const float* a, const float* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::Avx2) return dot_avx2(a, b, n);
#endif
    return dot_scalar(a, b, n);
}

void dot_batch(const float* query, const float* base, std::size_t rows,
               std::size_t dim, float* scores) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::Avx2) {
        dot_batch_avx2(query, base, rows, dim, scores);
        return;
    }
#endif
    dot_batch_scalar(query, base, rows, dim, scores);
}

float l2_norm(const float* v, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += double(v[i]) * double(v[i]);
    return float(std::sqrt(acc));
}

void l2_normalize(float* v, std::size_t n) {
    const float norm = l2_norm(v, n);
    for (std::size_t i = 0; i < n; ++i) v[i] /= norm;
}

void softmax_inplace(float* v, std::size_t n) {
    if (n == 0) return;
    float mx = v[0];
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, v[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::exp(v[i] - mx);
        sum += v[i];
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = float(v[i] / sum);
}

}  // namespace lara::kernels

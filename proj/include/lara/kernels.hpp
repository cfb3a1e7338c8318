#pragma once

#include <cstddef>
#include <string>

namespace lara::kernels {

// Arithmetic inner loops used by the embedder, classifier and retriever.
// Every kernel has a scalar reference implementation; dot/dot_batch also
// have an AVX2 variant picked at runtime. Norms, normalization and softmax
// are deliberately scalar-only so embeddings and probability vectors are
// bit-identical no matter which backend the host selects.

enum class Backend { Scalar, Avx2 };

// Backend chosen at first use: AVX2 when the CPU supports it, else scalar.
// The environment variable LARA_KERNELS (scalar|avx2|auto) overrides.
Backend active_backend();

// Test hook. Throws Error if the requested backend is unsupported here.
void force_backend(Backend b);

const char* backend_name(Backend b);
bool avx2_supported();

float dot(const float* a, const float* b, std::size_t n);

// scores[i] = dot(query, base + i*dim), rows laid out contiguously.
void dot_batch(const float* query, const float* base, std::size_t rows,
               std::size_t dim, float* scores);

float l2_norm(const float* v, std::size_t n);

// Divides by the L2 norm. Precondition: norm > 0.
void l2_normalize(float* v, std::size_t n);

// Max-subtracted softmax.
void softmax_inplace(float* v, std::size_t n);

// Reference paths, exposed for equivalence tests.
float dot_scalar(const float* a, const float* b, std::size_t n);
void dot_batch_scalar(const float* query, const float* base, std::size_t rows,
                      std::size_t dim, float* scores);

#if defined(__x86_64__) || defined(_M_X64)
float dot_avx2(const float* a, const float* b, std::size_t n);
void dot_batch_avx2(const float* query, const float* base, std::size_t rows,
                    std::size_t dim, float* scores);
#endif

}  // namespace lara::kernels

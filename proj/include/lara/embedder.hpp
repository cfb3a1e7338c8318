#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lara {

struct EmbedderDescriptor {
    std::string name;
    std::size_t dimension = 0;
};

// Unit-norm text representation. Producers guarantee ||values|| = 1 ± 1e-6
// and all components finite.
struct Embedding {
    std::vector<float> values;

    std::size_t dim() const { return values.size(); }
    const float* data() const { return values.data(); }
};

// Pluggable text encoder. Implementations are immutable after construction
// and safe for concurrent embed() calls.
class Embedder {
public:
    virtual ~Embedder() = default;

    virtual const EmbedderDescriptor& descriptor() const = 0;

    // Returns a unit-norm vector of length descriptor().dimension.
    // Deterministic: identical input bytes yield identical output bytes.
    // Throws EmptyTextError when the input is empty or whitespace-only.
    virtual Embedding embed(std::string_view text) const = 0;

    std::size_t dimension() const { return descriptor().dimension; }
};

// Hermetic reference embedder. Lowercases the text (ASCII), extracts
// overlapping character trigrams over the space-padded byte string,
// feature-hashes each trigram with FNV-1a 64 into `dimension` buckets,
// accumulates counts and L2-normalizes. No model weights, no I/O.
class TrigramHashEmbedder final : public Embedder {
public:
    static constexpr std::size_t kDefaultDimension = 256;

    explicit TrigramHashEmbedder(std::size_t dimension = kDefaultDimension);

    const EmbedderDescriptor& descriptor() const override { return descriptor_; }
    Embedding embed(std::string_view text) const override;

    // Fixed hash, exposed so tests can enumerate bucket assignments
    // independently. Offset basis 14695981039346656037, prime 1099511628211.
    static std::uint64_t fnv1a64(std::string_view bytes);

private:
    EmbedderDescriptor descriptor_;
};

// Dot product of two unit vectors. Symmetric bit-for-bit in its arguments.
// Throws DimensionMismatchError when dimensions differ.
float cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace lara

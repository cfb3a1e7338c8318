#include "lara/embedder.hpp"

#include "lara/error.hpp"
#include "lara/kernels.hpp"
#include "lara/text.hpp"

namespace lara {

TrigramHashEmbedder::TrigramHashEmbedder(std::size_t dimension) {
    if (dimension == 0) throw ConfigError("embedder dimension must be >= 1");
    descriptor_.name = "trigram-fnv1a64";
    descriptor_.dimension = dimension;
}

std::uint64_t TrigramHashEmbedder::fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Embedding TrigramHashEmbedder::embed(std::string_view text) const {
    const std::string_view trimmed = trim_view(text);
    if (trimmed.empty()) throw EmptyTextError("cannot embed empty or whitespace-only text");

    const std::string padded = " " + to_lower_ascii(trimmed) + " ";
    const std::size_t d = descriptor_.dimension;

    Embedding out;
    out.values.assign(d, 0.0f);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        const auto bucket = fnv1a64(std::string_view(padded).substr(i, 3)) % d;
        out.values[bucket] += 1.0f;
    }

    // Unreachable for non-empty padded text, guarded anyway so a non-unit
    // vector can never escape.
    if (kernels::l2_norm(out.data(), d) == 0.0f) {
        throw EmptyTextError("text produced an all-zero feature vector");
    }
    kernels::l2_normalize(out.values.data(), d);
    return out;
}

float cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatchError("cosine_similarity: dimensions differ (" +
                                     std::to_string(a.dim()) + " vs " +
                                     std::to_string(b.dim()) + ")");
    }
    return kernels::dot(a.data(), b.data(), a.dim());
}

}  // namespace lara

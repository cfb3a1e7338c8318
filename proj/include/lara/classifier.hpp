#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lara/catalog.hpp"
#include "lara/embedder.hpp"

namespace lara {

// Linear classification head over embeddings. Row j of `weights` holds the
// weight vector of catalog intent j (the j-th column of the d x |I| matrix),
// so logits are one batched dot product per intent.
struct LinearHead {
    std::size_t dim = 0;
    std::vector<float> weights;  // intent_count() rows of length dim
    std::vector<float> bias;

    std::size_t intent_count() const { return bias.size(); }
    const float* row(std::size_t j) const { return weights.data() + j * dim; }
};

// Text format: header "d=<int> k=<int>", then one line per catalog intent:
// "<intent_id>\t<d space-separated floats>\t<float bias>". UTF-8, LF.
LinearHead load_head(const std::filesystem::path& path, const IntentCatalog& catalog);
void save_head(const LinearHead& head, const std::filesystem::path& path,
               const IntentCatalog& catalog);

// Probability vector aligned to catalog order; sums to 1 within 1e-6.
struct IntentDistribution {
    std::vector<float> probabilities;
    std::size_t size() const { return probabilities.size(); }
};

// One chat session: ordered user queries, only the last of which may carry
// a gold label.
struct Session {
    std::vector<std::string> queries;
    std::optional<std::string> gold_intent;
    std::optional<std::string> market;

    std::size_t turns() const { return queries.size(); }
    const std::string& last_query() const { return queries.back(); }

    // n >= 1, every query non-empty after trim and single-line, gold intent
    // (when present) exists in the catalog when one is given.
    void validate(const IntentCatalog* catalog = nullptr) const;
};

IntentDistribution classify(std::string_view text, const LinearHead& head,
                            const Embedder& embedder);

std::size_t argmax_index(const IntentDistribution& dist);

// Argmax intent; ties broken by lowest catalog index.
std::string top_intent(const IntentDistribution& dist, const IntentCatalog& catalog);

// Q_c = {q_n, "q_1, q_n", ..., "q_{n-1}, q_n"} — comma+space join, history
// order preserved, commas inside queries left alone.
std::vector<std::string> build_query_combinations(const Session& session);

// Argmax intent of every query combination, duplicates removed keeping the
// first occurrence. Result length in [1, n].
std::vector<std::string> select_candidate_intents(const Session& session,
                                                  const LinearHead& head,
                                                  const Embedder& embedder,
                                                  const IntentCatalog& catalog);

}  // namespace lara

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lara/catalog.hpp"
#include "lara/classifier.hpp"
#include "lara/embedder.hpp"

namespace lara {

struct TrainingSample {
    std::string text;
    std::string intent_id;
    std::optional<std::string> market;
};

// Demonstration pool with precomputed embeddings, grouped by intent.
// Immutable after build; all lookups are safe for concurrent readers.
class DemoIndex {
public:
    static DemoIndex build(const std::vector<TrainingSample>& pool,
                           const Embedder& embedder, const IntentCatalog& catalog);

    const EmbedderDescriptor& descriptor() const { return descriptor_; }
    std::size_t size() const { return samples_.size(); }
    std::size_t dim() const { return descriptor_.dimension; }

    const TrainingSample& sample(std::size_t row) const { return samples_.at(row); }
    const float* embedding(std::size_t row) const { return matrix_.data() + row * dim(); }
    const std::vector<float>& embedding_matrix() const { return matrix_; }

    // Pool-order row ids for one intent; nullptr when the intent has no samples.
    const std::vector<std::uint32_t>* rows_for_intent(std::string_view intent_id) const;

    // Intents present in the pool, in first-appearance order.
    const std::vector<std::string>& intents() const { return intent_order_; }

    std::uint64_t pool_hash() const { return pool_hash_; }
    static std::uint64_t hash_pool(const std::vector<TrainingSample>& pool);

    // Versioned binary cache keyed by (embedder name, dimension, pool hash).
    // load() returns nullopt on any key mismatch or unreadable file; callers
    // rebuild silently.
    void save(const std::filesystem::path& path) const;
    static std::optional<DemoIndex> load(const std::filesystem::path& path,
                                         const EmbedderDescriptor& expected,
                                         std::uint64_t expected_pool_hash);

private:
    EmbedderDescriptor descriptor_;
    std::vector<TrainingSample> samples_;
    std::vector<float> matrix_;  // size() rows x dim(), row-major
    std::unordered_map<std::string, std::vector<std::uint32_t>> rows_by_intent_;
    std::vector<std::string> intent_order_;
    std::uint64_t pool_hash_ = 0;
};

struct Demonstration {
    std::string text;
    std::string intent_id;
    // cosine_similarity(embed(text), embed(q_all)); representatives are
    // scored like any sample, their protection lives in the pruning policy.
    float score = 0.0f;
    bool is_representative = false;
};

struct DemonstrationSet {
    std::vector<Demonstration> items;  // non-decreasing by score
    std::string q_all;
    // Candidate intents in selection order; drives round-robin pruning.
    std::vector<std::string> candidate_order;
    bool pruned = false;
    // Rendered-line token total, set by prune_to_budget.
    long token_total = 0;
};

// All session queries joined with ", " (the same join as Q_c construction).
std::string concat_session(const Session& session);

// Top (K-1) pool samples of the intent by similarity to q_all (ties by pool
// order), returned highest score first, plus the representative query
// appended last. When the catalog has no representative, the highest-scoring
// sample takes the role instead. Throws NoDemonstrationsError when the
// intent has neither samples nor a representative.
std::vector<Demonstration> retrieve_for_intent(const DemoIndex& index,
                                               std::string_view intent_id,
                                               const Embedding& q_all_embedding,
                                               std::size_t k,
                                               const IntentCatalog& catalog,
                                               const Embedder& embedder);

// Union of per-intent retrievals in candidate order, stably sorted by score
// non-decreasing so the nearest examples sit closest to the context.
DemonstrationSet assemble_demonstrations(const DemoIndex& index,
                                         const std::vector<std::string>& candidate_intents,
                                         const Session& session, std::size_t k,
                                         const IntentCatalog& catalog,
                                         const Embedder& embedder);

// Token cost of one demonstration as it will appear in the prompt.
using DemoTokenCounter = std::function<long(const Demonstration&)>;

// Round-robin single removals over candidate intents, each round taking the
// intent's lowest-score non-representative item, never below one
// demonstration per intent. When the one-per-intent floor still exceeds the
// budget the set is returned over budget with pruned set. The pruned flag is
// sticky, which keeps the operation idempotent.
DemonstrationSet prune_to_budget(DemonstrationSet set, long budget_tokens,
                                 const DemoTokenCounter& token_counter);

// Working classification head with no training step: row j is the unit-
// normalized mean embedding of intent j's samples scaled by `temperature`,
// zero bias. Intents absent from the pool get a zero row.
LinearHead make_centroid_head(const DemoIndex& index, const IntentCatalog& catalog,
                              float temperature = 10.0f);

}  // namespace lara

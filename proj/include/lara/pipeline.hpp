#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lara/catalog.hpp"
#include "lara/classifier.hpp"
#include "lara/llm.hpp"
#include "lara/prompt.hpp"
#include "lara/retriever.hpp"

namespace lara {

enum class AblationMode { None, NoCandidateNarrowing, RandomDemos };

std::string_view ablation_name(AblationMode m);
AblationMode parse_ablation(std::string_view name);  // none|no-narrowing|random-demos

struct PipelineConfig {
    std::size_t k = 10;
    long budget_tokens = 2300;
    PromptVariant variant = PromptVariant::Formatted;
    AblationMode ablation = AblationMode::None;
    std::uint64_t random_seed = 0;  // used by the random-demos ablation
    std::string instruction;        // empty selects the built-in default
    // Decode caps per variant family; Prepend/Formatted are pinned to one
    // generated token at the API level.
    int max_new_tokens_plain = 32;
    int max_new_tokens_symbolic = 8;
};

enum class PredictionSource { Llm, Fallback };

struct DemoStats {
    std::vector<std::pair<std::string, long>> per_intent_counts;  // candidate order
    long token_total = 0;
    bool pruned = false;
};

struct PipelineResult {
    std::string predicted_intent;
    PredictionSource source = PredictionSource::Llm;
    std::string raw_generation;
    std::vector<std::string> candidates;
    DemoStats demo_stats;
    std::size_t prompt_bytes_len = 0;
};

// Immutable handles shared across sessions; safe for concurrent use as long
// as the backend is.
struct PipelineDeps {
    const IntentCatalog* catalog = nullptr;
    const DemoIndex* index = nullptr;
    const LinearHead* head = nullptr;
    const Embedder* embedder = nullptr;
    CompletionBackend* backend = nullptr;
    TokenCounter token_counter;  // empty selects count_tokens
};

// Full retrieval-augmented classification of the session's last query:
// candidate selection, per-intent demonstration retrieval, budget pruning,
// prompt render, greedy generation, parse. An unparseable generation falls
// back to the single-turn argmax on q_n. Backend errors propagate so callers
// can tell infrastructure failure from model failure.
PipelineResult classify_session_lara(const Session& session, const PipelineConfig& config,
                                     const PipelineDeps& deps);

// Baseline: single-turn classification of the ", "-joined whole session.
std::string classify_session_naive_concat(const Session& session, const LinearHead& head,
                                          const Embedder& embedder,
                                          const IntentCatalog& catalog);

// Baseline: among {q_n} and each "q_i, q_n", classify the candidate whose
// distribution is most confident (highest max probability, first wins ties).
std::string classify_session_selective_concat(const Session& session, const LinearHead& head,
                                              const Embedder& embedder,
                                              const IntentCatalog& catalog);

// config.ablation must not be None.
//  - NoCandidateNarrowing: top K*n demonstrations from the whole pool by
//    similarity to q_all, grouped by their own labels (no representative
//    injection), then the usual render/generate/parse.
//  - RandomDemos: candidate selection as normal, but per-intent
//    demonstrations are sampled uniformly without replacement under
//    config.random_seed; scores stay truthful cosines so ordering and
//    pruning behave as usual.
PipelineResult classify_session_ablation(const Session& session, const PipelineConfig& config,
                                         const PipelineDeps& deps);

}  // namespace lara

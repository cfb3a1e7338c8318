#include "lara/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "lara/error.hpp"
#include "lara/kernels.hpp"

namespace lara {

std::string_view ablation_name(AblationMode m) {
    switch (m) {
        case AblationMode::None: return "none";
        case AblationMode::NoCandidateNarrowing: return "no-narrowing";
        case AblationMode::RandomDemos: return "random-demos";
    }
    return "unknown";
}

AblationMode parse_ablation(std::string_view name) {
    if (name == "none") return AblationMode::None;
    if (name == "no-narrowing") return AblationMode::NoCandidateNarrowing;
    if (name == "random-demos") return AblationMode::RandomDemos;
    throw ConfigError("unknown ablation '" + std::string(name) +
                      "' (expected none|no-narrowing|random-demos)");
}

namespace {

void check_deps(const PipelineDeps& deps) {
    if (!deps.catalog || !deps.index || !deps.head || !deps.embedder || !deps.backend) {
        throw Error("pipeline dependencies are incomplete");
    }
}

DecodeParams decode_params_for(const PipelineConfig& config) {
    DecodeParams p;
    p.temperature = 0.0f;
    switch (config.variant) {
        case PromptVariant::Plain: p.max_new_tokens = config.max_new_tokens_plain; break;
        case PromptVariant::Symbolic: p.max_new_tokens = config.max_new_tokens_symbolic; break;
        case PromptVariant::Prepend:
        case PromptVariant::Formatted: p.max_new_tokens = 1; break;
    }
    return p;
}

DemoStats stats_of(const DemonstrationSet& set) {
    DemoStats stats;
    stats.token_total = set.token_total;
    stats.pruned = set.pruned;
    for (const auto& intent : set.candidate_order) {
        long count = 0;
        for (const auto& d : set.items) {
            if (d.intent_id == intent) ++count;
        }
        stats.per_intent_counts.emplace_back(intent, count);
    }
    return stats;
}

// Shared tail of every ICL path: symbol map, pruning, render, generate,
// parse, fallback.
PipelineResult run_icl(const Session& session, const PipelineConfig& config,
                       const PipelineDeps& deps, DemonstrationSet demos) {
    const IntentCatalog& catalog = *deps.catalog;
    const TokenCounter counter =
        deps.token_counter ? deps.token_counter : TokenCounter(&count_tokens);

    std::optional<SymbolMap> symbol_map;
    if (config.variant != PromptVariant::Plain) {
        symbol_map = SymbolMap::make(demos.candidate_order);
    }
    const SymbolMap* map_ptr = symbol_map ? &*symbol_map : nullptr;

    const auto demo_cost = [&](const Demonstration& d) {
        return counter(example_line(d, config.variant, map_ptr, catalog));
    };
    demos = prune_to_budget(std::move(demos), config.budget_tokens, demo_cost);

    const std::string instruction =
        config.instruction.empty() ? default_instruction() : config.instruction;
    const RenderedPrompt prompt =
        render(config.variant, instruction, demos, session, map_ptr, catalog);

    const GenerationResult gen = deps.backend->generate(prompt.text, decode_params_for(config));
    const auto parsed = parse_generation(gen.text, config.variant, map_ptr,
                                         demos.candidate_order, catalog);

    PipelineResult result;
    result.raw_generation = gen.text;
    result.candidates = demos.candidate_order;
    result.demo_stats = stats_of(demos);
    result.prompt_bytes_len = prompt.text.size();
    if (parsed) {
        result.predicted_intent = *parsed;
        result.source = PredictionSource::Llm;
    } else {
        result.predicted_intent =
            top_intent(classify(session.last_query(), *deps.head, *deps.embedder), catalog);
        result.source = PredictionSource::Fallback;
    }
    return result;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
    return seed ^ TrigramHashEmbedder::fnv1a64(tag);
}

// Uniform without replacement: partial Fisher-Yates over explicit indices so
// the draw sequence does not depend on the standard library in use.
std::vector<std::uint32_t> sample_rows(const std::vector<std::uint32_t>& rows,
                                       std::size_t take, std::mt19937_64& rng) {
    std::vector<std::uint32_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = 0; i < take && i + 1 < order.size(); ++i) {
        const std::size_t j = i + std::size_t(rng() % (order.size() - i));
        std::swap(order[i], order[j]);
    }
    std::vector<std::uint32_t> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(rows[order[i]]);
    return out;
}

DemonstrationSet assemble_random_demonstrations(const Session& session,
                                                const PipelineConfig& config,
                                                const PipelineDeps& deps,
                                                const std::vector<std::string>& candidates) {
    const DemoIndex& index = *deps.index;
    const IntentCatalog& catalog = *deps.catalog;

    DemonstrationSet set;
    set.q_all = concat_session(session);
    set.candidate_order = candidates;
    const Embedding q_emb = deps.embedder->embed(set.q_all);

    for (const auto& intent : candidates) {
        const CatalogEntry& entry = catalog.entry_for(intent);
        const auto* rows = index.rows_for_intent(intent);
        const bool has_samples = rows != nullptr && !rows->empty();
        if (!has_samples && !entry.representative_query) {
            throw NoDemonstrationsError("intent '" + intent +
                                        "' has no samples and no representative query");
        }

        std::vector<Demonstration> demos;
        if (has_samples) {
            std::mt19937_64 rng(mix_seed(config.random_seed, intent));
            std::size_t take = std::min(config.k - 1, rows->size());
            if (take == 0 && !entry.representative_query) take = 1;
            for (const auto row : sample_rows(*rows, take, rng)) {
                const auto& s = index.sample(row);
                const float score =
                    kernels::dot(q_emb.data(), index.embedding(row), index.dim());
                demos.push_back({s.text, s.intent_id, score, false});
            }
        }
        if (entry.representative_query) {
            Demonstration* already = nullptr;
            for (auto& d : demos) {
                if (d.text == *entry.representative_query) { already = &d; break; }
            }
            if (already != nullptr) {
                already->is_representative = true;
            } else {
                const Embedding rep_emb = deps.embedder->embed(*entry.representative_query);
                const float score = kernels::dot(q_emb.data(), rep_emb.data(), index.dim());
                demos.push_back({*entry.representative_query, intent, score, true});
            }
        } else if (!demos.empty()) {
            auto best = std::max_element(demos.begin(), demos.end(),
                                         [](const Demonstration& a, const Demonstration& b) {
                                             return a.score < b.score;
                                         });
            best->is_representative = true;
        }
        for (auto& d : demos) set.items.push_back(std::move(d));
    }
    std::stable_sort(set.items.begin(), set.items.end(),
                     [](const Demonstration& a, const Demonstration& b) {
                         return a.score < b.score;
                     });
    return set;
}

DemonstrationSet assemble_full_scan(const Session& session, const PipelineConfig& config,
                                    const PipelineDeps& deps) {
    const DemoIndex& index = *deps.index;

    DemonstrationSet set;
    set.q_all = concat_session(session);
    const Embedding q_emb = deps.embedder->embed(set.q_all);

    std::vector<float> scores(index.size());
    kernels::dot_batch(q_emb.data(), index.embedding_matrix().data(), index.size(),
                       index.dim(), scores.data());

    std::vector<std::uint32_t> order(index.size());
    std::iota(order.begin(), order.end(), 0u);
    const std::size_t take = std::min(config.k * session.turns(), index.size());
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] > scores[b];
    });
    order.resize(take);

    // group by the retrieved samples' own labels, in retrieval order
    for (const auto row : order) {
        const auto& intent = index.sample(row).intent_id;
        if (std::find(set.candidate_order.begin(), set.candidate_order.end(), intent) ==
            set.candidate_order.end()) {
            set.candidate_order.push_back(intent);
        }
        const auto& s = index.sample(row);
        set.items.push_back({s.text, s.intent_id, scores[row], false});
    }
    // ascending with ties in pool order (the descending sort left ties
    // pool-ordered, and stable re-sort preserves that)
    std::stable_sort(set.items.begin(), set.items.end(),
                     [](const Demonstration& a, const Demonstration& b) {
                         return a.score < b.score;
                     });
    return set;
}

}  // namespace

PipelineResult classify_session_lara(const Session& session, const PipelineConfig& config,
                                     const PipelineDeps& deps) {
    check_deps(deps);
    if (config.ablation != AblationMode::None) {
        return classify_session_ablation(session, config, deps);
    }
    session.validate(deps.catalog);

    const auto candidates =
        select_candidate_intents(session, *deps.head, *deps.embedder, *deps.catalog);
    auto demos = assemble_demonstrations(*deps.index, candidates, session, config.k,
                                         *deps.catalog, *deps.embedder);
    return run_icl(session, config, deps, std::move(demos));
}

std::string classify_session_naive_concat(const Session& session, const LinearHead& head,
                                          const Embedder& embedder,
                                          const IntentCatalog& catalog) {
    return top_intent(classify(concat_session(session), head, embedder), catalog);
}

std::string classify_session_selective_concat(const Session& session, const LinearHead& head,
                                              const Embedder& embedder,
                                              const IntentCatalog& catalog) {
    const auto candidates = build_query_combinations(session);
    IntentDistribution best_dist;
    float best_conf = -1.0f;
    for (const auto& text : candidates) {
        IntentDistribution dist = classify(text, head, embedder);
        const float conf = dist.probabilities[argmax_index(dist)];
        if (conf > best_conf) {
            best_conf = conf;
            best_dist = std::move(dist);
        }
    }
    return top_intent(best_dist, catalog);
}

PipelineResult classify_session_ablation(const Session& session, const PipelineConfig& config,
                                         const PipelineDeps& deps) {
    check_deps(deps);
    if (config.ablation == AblationMode::None) {
        throw ConfigError("classify_session_ablation requires an ablation mode");
    }
    session.validate(deps.catalog);

    DemonstrationSet demos;
    if (config.ablation == AblationMode::NoCandidateNarrowing) {
        demos = assemble_full_scan(session, config, deps);
    } else {
        const auto candidates =
            select_candidate_intents(session, *deps.head, *deps.embedder, *deps.catalog);
        demos = assemble_random_demonstrations(session, config, deps, candidates);
    }
    return run_icl(session, config, deps, std::move(demos));
}

}  // namespace lara

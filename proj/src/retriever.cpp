#include "lara/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "lara/error.hpp"
#include "lara/kernels.hpp"
#include "lara/text.hpp"

namespace lara {

DemoIndex DemoIndex::build(const std::vector<TrainingSample>& pool,
                           const Embedder& embedder, const IntentCatalog& catalog) {
    if (pool.empty()) throw Error("cannot build index over an empty pool");

    DemoIndex index;
    index.descriptor_ = embedder.descriptor();
    index.samples_ = pool;
    index.matrix_.resize(pool.size() * embedder.dimension());
    index.pool_hash_ = hash_pool(pool);

    for (std::size_t row = 0; row < pool.size(); ++row) {
        const auto& s = pool[row];
        if (!catalog.contains(s.intent_id)) {
            throw UnknownIntentError("pool sample " + std::to_string(row) +
                                     " has unknown intent '" + s.intent_id + "'");
        }
        const Embedding e = embedder.embed(s.text);
        std::copy(e.values.begin(), e.values.end(),
                  index.matrix_.begin() + long(row * embedder.dimension()));
        auto [it, inserted] = index.rows_by_intent_.try_emplace(s.intent_id);
        if (inserted) index.intent_order_.push_back(s.intent_id);
        it->second.push_back(std::uint32_t(row));
    }
    return index;
}

const std::vector<std::uint32_t>* DemoIndex::rows_for_intent(std::string_view intent_id) const {
    const auto it = rows_by_intent_.find(std::string(intent_id));
    if (it == rows_by_intent_.end()) return nullptr;
    return &it->second;
}

std::uint64_t DemoIndex::hash_pool(const std::vector<TrainingSample>& pool) {
    std::uint64_t h = 14695981039346656037ULL;
    const auto mix = [&h](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& s : pool) {
        mix(s.text);
        mix("\x1f");
        mix(s.intent_id);
        mix("\x1f");
        if (s.market) mix(*s.market);
        mix("\x1e");
    }
    return h;
}

namespace {

constexpr char kIndexMagic[8] = {'L', 'A', 'R', 'A', 'I', 'D', 'X', '\x01'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_str(std::ofstream& out, std::string_view s) {
    write_u32(out, std::uint32_t(s.size()));
    out.write(s.data(), long(s.size()));
}

bool read_u32(std::ifstream& in, std::uint32_t& v) {
    return bool(in.read(reinterpret_cast<char*>(&v), sizeof v));
}
bool read_u64(std::ifstream& in, std::uint64_t& v) {
    return bool(in.read(reinterpret_cast<char*>(&v), sizeof v));
}
bool read_str(std::ifstream& in, std::string& s, std::uint32_t max_len = 1u << 24) {
    std::uint32_t len = 0;
    if (!read_u32(in, len) || len > max_len) return false;
    s.resize(len);
    return bool(in.read(s.data(), long(len)));
}

}  // namespace

void DemoIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write index file: " + path.string());

    out.write(kIndexMagic, sizeof kIndexMagic);
    write_str(out, descriptor_.name);
    write_u32(out, std::uint32_t(descriptor_.dimension));
    write_u64(out, pool_hash_);
    write_u64(out, samples_.size());
    for (const auto& s : samples_) {
        write_str(out, s.text);
        write_str(out, s.intent_id);
        const char has_market = s.market ? 1 : 0;
        out.write(&has_market, 1);
        if (s.market) write_str(out, *s.market);
    }
    out.write(reinterpret_cast<const char*>(matrix_.data()),
              long(matrix_.size() * sizeof(float)));
    if (!out) throw Error("short write to index file: " + path.string());
}

std::optional<DemoIndex> DemoIndex::load(const std::filesystem::path& path,
                                         const EmbedderDescriptor& expected,
                                         std::uint64_t expected_pool_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;

    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kIndexMagic, 8) != 0) {
        return std::nullopt;
    }

    DemoIndex index;
    std::uint32_t dim = 0;
    std::uint64_t count = 0;
    if (!read_str(in, index.descriptor_.name) || !read_u32(in, dim) ||
        !read_u64(in, index.pool_hash_) || !read_u64(in, count)) {
        return std::nullopt;
    }
    index.descriptor_.dimension = dim;
    if (index.descriptor_.name != expected.name || dim != expected.dimension ||
        index.pool_hash_ != expected_pool_hash || count == 0) {
        return std::nullopt;
    }

    index.samples_.resize(count);
    for (auto& s : index.samples_) {
        char has_market = 0;
        if (!read_str(in, s.text) || !read_str(in, s.intent_id) || !in.read(&has_market, 1)) {
            return std::nullopt;
        }
        if (has_market) {
            std::string m;
            if (!read_str(in, m)) return std::nullopt;
            s.market = std::move(m);
        }
    }
    index.matrix_.resize(count * dim);
    if (!in.read(reinterpret_cast<char*>(index.matrix_.data()),
                 long(index.matrix_.size() * sizeof(float)))) {
        return std::nullopt;
    }

    for (std::size_t row = 0; row < index.samples_.size(); ++row) {
        auto [it, inserted] = index.rows_by_intent_.try_emplace(index.samples_[row].intent_id);
        if (inserted) index.intent_order_.push_back(index.samples_[row].intent_id);
        it->second.push_back(std::uint32_t(row));
    }
    return index;
}

std::string concat_session(const Session& session) {
    session.validate();
    return join(session.queries, ", ");
}

std::vector<Demonstration> retrieve_for_intent(const DemoIndex& index,
                                               std::string_view intent_id,
                                               const Embedding& q_all_embedding,
                                               std::size_t k,
                                               const IntentCatalog& catalog,
                                               const Embedder& embedder) {
    if (k < 1) throw Error("K must be >= 1");
    if (q_all_embedding.dim() != index.dim() || embedder.dimension() != index.dim()) {
        throw DimensionMismatchError("query embedding dimension does not match index");
    }

    const CatalogEntry& entry = catalog.entry_for(intent_id);
    const std::vector<std::uint32_t>* rows = index.rows_for_intent(intent_id);
    const bool has_samples = rows != nullptr && !rows->empty();
    if (!has_samples && !entry.representative_query) {
        throw NoDemonstrationsError("intent '" + std::string(intent_id) +
                                    "' has no samples and no representative query");
    }

    std::vector<Demonstration> demos;
    if (has_samples) {
        std::vector<float> scores(rows->size());
        for (std::size_t i = 0; i < rows->size(); ++i) {
            scores[i] = kernels::dot(q_all_embedding.data(), index.embedding((*rows)[i]),
                                     index.dim());
        }
        // argsort by score descending, ties by pool order
        std::vector<std::uint32_t> order(rows->size());
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return scores[a] > scores[b]; });

        std::size_t take = std::min(k - 1, rows->size());
        if (take == 0 && !entry.representative_query) take = 1;  // best sample plays r
        for (std::size_t i = 0; i < take; ++i) {
            const auto& s = index.sample((*rows)[order[i]]);
            demos.push_back({s.text, s.intent_id, scores[order[i]], false});
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
            const Embedding rep_emb = embedder.embed(*entry.representative_query);
            const float score =
                kernels::dot(q_all_embedding.data(), rep_emb.data(), index.dim());
            demos.push_back({*entry.representative_query, entry.intent_id, score, true});
        }
    } else if (!demos.empty()) {
        demos.front().is_representative = true;
    }
    return demos;
}

DemonstrationSet assemble_demonstrations(const DemoIndex& index,
                                         const std::vector<std::string>& candidate_intents,
                                         const Session& session, std::size_t k,
                                         const IntentCatalog& catalog,
                                         const Embedder& embedder) {
    if (candidate_intents.empty()) throw Error("candidate intent list is empty");
    for (std::size_t i = 0; i < candidate_intents.size(); ++i) {
        for (std::size_t j = i + 1; j < candidate_intents.size(); ++j) {
            if (candidate_intents[i] == candidate_intents[j]) {
                throw Error("candidate intents must be deduplicated");
            }
        }
    }

    DemonstrationSet set;
    set.q_all = concat_session(session);
    set.candidate_order = candidate_intents;

    const Embedding q_emb = embedder.embed(set.q_all);
    for (const auto& intent : candidate_intents) {
        auto per_intent = retrieve_for_intent(index, intent, q_emb, k, catalog, embedder);
        for (auto& d : per_intent) set.items.push_back(std::move(d));
    }
    std::stable_sort(set.items.begin(), set.items.end(),
                     [](const Demonstration& a, const Demonstration& b) {
                         return a.score < b.score;
                     });
    return set;
}

DemonstrationSet prune_to_budget(DemonstrationSet set, long budget_tokens,
                                 const DemoTokenCounter& token_counter) {
    if (budget_tokens < 1) throw Error("token budget must be >= 1");

    std::vector<long> costs(set.items.size());
    long total = 0;
    for (std::size_t i = 0; i < set.items.size(); ++i) {
        costs[i] = token_counter(set.items[i]);
        total += costs[i];
    }
    std::unordered_map<std::string, long> count_by_intent;
    for (const auto& d : set.items) ++count_by_intent[d.intent_id];

    bool removed_any = false;
    while (total > budget_tokens) {
        bool progress = false;
        for (const auto& intent : set.candidate_order) {
            if (total <= budget_tokens) break;
            auto cit = count_by_intent.find(intent);
            if (cit == count_by_intent.end() || cit->second <= 1) continue;
            // items are ascending, so the first non-representative match is
            // the intent's lowest-score removable demonstration
            for (std::size_t i = 0; i < set.items.size(); ++i) {
                if (set.items[i].intent_id == intent && !set.items[i].is_representative) {
                    total -= costs[i];
                    set.items.erase(set.items.begin() + long(i));
                    costs.erase(costs.begin() + long(i));
                    --cit->second;
                    removed_any = true;
                    progress = true;
                    break;
                }
            }
        }
        if (!progress) break;  // every intent at the one-demonstration floor
    }

    set.token_total = total;
    set.pruned = set.pruned || removed_any || total > budget_tokens;
    return set;
}

LinearHead make_centroid_head(const DemoIndex& index, const IntentCatalog& catalog,
                              float temperature) {
    LinearHead head;
    head.dim = index.dim();
    head.weights.assign(catalog.size() * head.dim, 0.0f);
    head.bias.assign(catalog.size(), 0.0f);

    std::vector<double> mean(head.dim);
    for (std::size_t j = 0; j < catalog.size(); ++j) {
        const auto* rows = index.rows_for_intent(catalog.entry(j).intent_id);
        if (rows == nullptr || rows->empty()) continue;

        std::fill(mean.begin(), mean.end(), 0.0);
        for (const auto row : *rows) {
            const float* e = index.embedding(row);
            for (std::size_t i = 0; i < head.dim; ++i) mean[i] += e[i];
        }
        double norm_sq = 0.0;
        for (const double m : mean) norm_sq += m * m;
        if (norm_sq == 0.0) continue;
        const double scale = double(temperature) / std::sqrt(norm_sq);
        for (std::size_t i = 0; i < head.dim; ++i) {
            head.weights[j * head.dim + i] = float(mean[i] * scale);
        }
    }
    return head;
}

}  // namespace lara

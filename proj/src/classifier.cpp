#include "lara/classifier.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lara/error.hpp"
#include "lara/kernels.hpp"
#include "lara/text.hpp"

namespace lara {

void Session::validate(const IntentCatalog* catalog) const {
    if (queries.empty()) throw ParseError("session must contain at least one query");
    for (const auto& q : queries) {
        if (trim_view(q).empty()) throw ParseError("session query is empty or whitespace-only");
        if (q.find('\n') != std::string::npos || q.find('\r') != std::string::npos) {
            throw ParseError("session query must be a single line");
        }
    }
    if (gold_intent && catalog && !catalog->contains(*gold_intent)) {
        throw UnknownIntentError("gold intent '" + *gold_intent + "' not in catalog");
    }
}

IntentDistribution classify(std::string_view text, const LinearHead& head,
                            const Embedder& embedder) {
    if (head.dim != embedder.dimension()) {
        throw DimensionMismatchError("head dimension " + std::to_string(head.dim) +
                                     " does not match embedder dimension " +
                                     std::to_string(embedder.dimension()));
    }
    if (head.weights.size() != head.dim * head.intent_count()) {
        throw DimensionMismatchError("head weight matrix shape is inconsistent");
    }

    const Embedding h = embedder.embed(text);

    IntentDistribution dist;
    dist.probabilities.resize(head.intent_count());
    kernels::dot_batch(h.data(), head.weights.data(), head.intent_count(), head.dim,
                       dist.probabilities.data());
    for (std::size_t j = 0; j < head.intent_count(); ++j) {
        dist.probabilities[j] += head.bias[j];
    }
    kernels::softmax_inplace(dist.probabilities.data(), dist.probabilities.size());
    return dist;
}

std::size_t argmax_index(const IntentDistribution& dist) {
    if (dist.probabilities.empty()) throw Error("argmax of empty distribution");
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.probabilities.size(); ++i) {
        if (dist.probabilities[i] > dist.probabilities[best]) best = i;
    }
    return best;
}

std::string top_intent(const IntentDistribution& dist, const IntentCatalog& catalog) {
    if (dist.size() != catalog.size()) {
        throw DimensionMismatchError("distribution size does not match catalog size");
    }
    return catalog.entry(argmax_index(dist)).intent_id;
}

std::vector<std::string> build_query_combinations(const Session& session) {
    session.validate();
    const std::string& last = session.last_query();
    std::vector<std::string> combos;
    combos.reserve(session.turns());
    combos.push_back(last);
    for (std::size_t i = 0; i + 1 < session.turns(); ++i) {
        combos.push_back(session.queries[i] + ", " + last);
    }
    return combos;
}

std::vector<std::string> select_candidate_intents(const Session& session,
                                                  const LinearHead& head,
                                                  const Embedder& embedder,
                                                  const IntentCatalog& catalog) {
    std::vector<std::string> candidates;
    for (const auto& combo : build_query_combinations(session)) {
        std::string intent = top_intent(classify(combo, head, embedder), catalog);
        bool seen = false;
        for (const auto& c : candidates) {
            if (c == intent) { seen = true; break; }
        }
        if (!seen) candidates.push_back(std::move(intent));
    }
    return candidates;
}

LinearHead load_head(const std::filesystem::path& path, const IntentCatalog& catalog) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open head file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError("head file is empty", 1);
    std::size_t d = 0, k = 0;
    if (std::sscanf(line.c_str(), "d=%zu k=%zu", &d, &k) != 2 || d == 0) {
        throw ParseError("expected header 'd=<int> k=<int>'", 1);
    }
    if (k != catalog.size()) {
        throw ParseError("head declares " + std::to_string(k) + " intents but catalog has " +
                         std::to_string(catalog.size()));
    }

    LinearHead head;
    head.dim = d;
    head.weights.reserve(d * k);
    head.bias.reserve(k);

    long line_no = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (!std::getline(in, line)) throw ParseError("unexpected end of head file", line_no + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError("expected <intent_id>\\t<weights>\\t<bias>", line_no);
        }
        if (fields[0] != catalog.entry(j).intent_id) {
            throw ParseError("intent '" + fields[0] + "' out of catalog order (expected '" +
                             catalog.entry(j).intent_id + "')", line_no);
        }
        std::istringstream ws(fields[1]);
        float w = 0.0f;
        std::size_t count = 0;
        while (ws >> w) {
            head.weights.push_back(w);
            ++count;
        }
        if (count != d) {
            throw ParseError("expected " + std::to_string(d) + " weights, got " +
                             std::to_string(count), line_no);
        }
        char* end = nullptr;
        const float b = std::strtof(fields[2].c_str(), &end);
        if (end == fields[2].c_str()) throw ParseError("bad bias value", line_no);
        head.bias.push_back(b);
    }
    return head;
}

void save_head(const LinearHead& head, const std::filesystem::path& path,
               const IntentCatalog& catalog) {
    if (head.intent_count() != catalog.size()) {
        throw DimensionMismatchError("head intent count does not match catalog");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write head file: " + path.string());

    out << "d=" << head.dim << " k=" << head.intent_count() << '\n';
    char buf[64];
    for (std::size_t j = 0; j < head.intent_count(); ++j) {
        out << catalog.entry(j).intent_id << '\t';
        for (std::size_t i = 0; i < head.dim; ++i) {
            std::snprintf(buf, sizeof(buf), "%.9g", double(head.weights[j * head.dim + i]));
            if (i > 0) out << ' ';
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.9g", double(head.bias[j]));
        out << '\t' << buf << '\n';
    }
}

}  // namespace lara

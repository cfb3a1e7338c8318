#include "lara/llm.hpp"

#include <cctype>

#include "lara/embedder.hpp"
#include "lara/error.hpp"

namespace lara {

long count_tokens(std::string_view text) {
    long units = 0;
    long symbols = 0;
    bool in_unit = false;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::isspace(c)) {
            in_unit = false;
            continue;
        }
        if (!in_unit) {
            ++units;
            in_unit = true;
        }
        if (c < 0x80 && !std::isalnum(c)) ++symbols;
    }
    return units + symbols;
}

namespace {

void validate_request(const std::string& prompt, const DecodeParams& params) {
    if (prompt.empty()) throw Error("prompt must be non-empty");
    if (params.max_new_tokens < 1) throw Error("max_new_tokens must be >= 1");
    if (params.temperature != 0.0f) {
        throw Error("only greedy decoding (temperature 0) is supported");
    }
}

}  // namespace

void ScriptedBackend::set_response(std::string_view prompt, std::string response) {
    by_prompt_hash_[TrigramHashEmbedder::fnv1a64(prompt)] = std::move(response);
}

GenerationResult ScriptedBackend::generate(const std::string& prompt,
                                           const DecodeParams& params) {
    validate_request(prompt, params);
    const auto it = by_prompt_hash_.find(TrigramHashEmbedder::fnv1a64(prompt));
    return {it != by_prompt_hash_.end() ? it->second : default_response_, 0,
            std::string(name())};
}

GenerationResult SimilarityBackend::generate(const std::string& prompt,
                                             const DecodeParams& params) {
    validate_request(prompt, params);

    constexpr std::string_view header = "# Examples\n";
    const auto begin = prompt.find(header);
    if (begin == std::string::npos) return {"", 0, std::string(name())};
    auto end = prompt.find("\n\n", begin);
    if (end == std::string::npos) end = prompt.size();

    // last example line == highest-score demonstration (the set is ascending)
    const std::string_view block(prompt.data() + begin + header.size(),
                                 end - begin - header.size());
    const auto last_nl = block.rfind('\n');
    const std::string_view last_line =
        last_nl == std::string_view::npos ? block : block.substr(last_nl + 1);

    constexpr std::string_view marker = " [Intent] ";
    const auto at = last_line.rfind(marker);
    if (at == std::string_view::npos) return {"", 0, std::string(name())};
    const std::string_view answer = last_line.substr(at + marker.size());

    // "A>label" means a prepended symbol; hierarchical labels never have a
    // single-character head segment, so answer with the symbol alone
    if (answer.size() >= 2 && answer[1] == '>') {
        return {std::string(1, answer[0]), 0, std::string(name())};
    }
    return {std::string(answer), 0, std::string(name())};
}

}  // namespace lara

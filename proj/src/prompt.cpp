#include "lara/prompt.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lara/error.hpp"
#include "lara/text.hpp"

namespace lara {

std::string_view variant_name(PromptVariant v) {
    switch (v) {
        case PromptVariant::Plain: return "plain";
        case PromptVariant::Symbolic: return "symbolic";
        case PromptVariant::Prepend: return "prepend";
        case PromptVariant::Formatted: return "formatted";
    }
    return "unknown";
}

PromptVariant parse_variant(std::string_view name) {
    if (name == "plain") return PromptVariant::Plain;
    if (name == "symbolic") return PromptVariant::Symbolic;
    if (name == "prepend") return PromptVariant::Prepend;
    if (name == "formatted") return PromptVariant::Formatted;
    throw ConfigError("unknown prompt variant '" + std::string(name) +
                      "' (expected plain|symbolic|prepend|formatted)");
}

SymbolMap SymbolMap::make(const std::vector<std::string>& intents) {
    if (intents.empty()) throw Error("symbol map needs at least one intent");
    if (intents.size() > kAlphabet.size()) {
        throw TooManyIntentsError("cannot map " + std::to_string(intents.size()) +
                                  " intents onto " + std::to_string(kAlphabet.size()) +
                                  " symbols");
    }
    SymbolMap map;
    map.entries_.reserve(intents.size());
    for (std::size_t i = 0; i < intents.size(); ++i) {
        for (const auto& [sym, existing] : map.entries_) {
            if (existing == intents[i]) throw Error("duplicate intent in symbol map");
        }
        map.entries_.emplace_back(kAlphabet[i], intents[i]);
    }
    return map;
}

std::optional<std::string> SymbolMap::intent_for(char symbol) const {
    for (const auto& [sym, intent] : entries_) {
        if (sym == symbol) return intent;
    }
    return std::nullopt;
}

char SymbolMap::symbol_for(std::string_view intent_id) const {
    for (const auto& [sym, intent] : entries_) {
        if (intent == intent_id) return sym;
    }
    throw UnknownIntentError("intent '" + std::string(intent_id) + "' not in symbol map");
}

bool SymbolMap::covers(std::string_view intent_id) const {
    for (const auto& [sym, intent] : entries_) {
        if (intent == intent_id) return true;
    }
    return false;
}

std::string default_instruction() {
    return "A chat between a curious user and an artificial intelligence assistant. "
           "The assistant gives helpful, detailed, and polite answers to the user's "
           "questions. USER: Determine the intent for the targetted message from the "
           "examples, you must use the context in the history messages to arrive at "
           "the best answer.";
}

const std::vector<std::string>& note_lines() {
    static const std::vector<std::string> lines = {
        "DO NOT create new intent on your own, you must strictly use the intents in the examples.",
        "DO NOT provide any explanation.",
        "Output ONLY ONE intent for the targgetted message.",
        "Consider the context from previous messages if the targetted message is unclear.",
    };
    return lines;
}

std::string example_line(const Demonstration& demo, PromptVariant variant,
                         const SymbolMap* symbol_map, const IntentCatalog& catalog) {
    std::string line = "[Content] " + demo.text + " [Intent] ";
    switch (variant) {
        case PromptVariant::Plain:
            line += catalog.label_of(demo.intent_id);
            break;
        case PromptVariant::Symbolic:
            if (!symbol_map) throw MissingSymbolMapError("symbolic variant needs a symbol map");
            line += symbol_map->symbol_for(demo.intent_id);
            break;
        case PromptVariant::Prepend:
        case PromptVariant::Formatted:
            if (!symbol_map) throw MissingSymbolMapError("prepend variant needs a symbol map");
            line += symbol_map->symbol_for(demo.intent_id);
            line += '>';
            line += catalog.label_of(demo.intent_id);
            break;
    }
    return line;
}

namespace {

std::vector<std::string> context_lines(const Session& session, PromptVariant variant) {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i + 1 < session.turns(); ++i) {
        if (variant == PromptVariant::Formatted) {
            lines.push_back("[History message " + std::to_string(i + 1) + "] " +
                            session.queries[i]);
        } else {
            lines.push_back("message " + std::to_string(i + 1) + ": " + session.queries[i]);
        }
    }
    lines.push_back("[Content] " + session.last_query());
    return lines;
}

}  // namespace

RenderedPrompt render(PromptVariant variant, std::string_view instruction,
                      const DemonstrationSet& demos, const Session& session,
                      const SymbolMap* symbol_map, const IntentCatalog& catalog) {
    if (demos.items.empty()) throw EmptyDemonstrationsError("cannot render without demonstrations");
    session.validate();
    if (variant != PromptVariant::Plain && symbol_map == nullptr) {
        throw MissingSymbolMapError("variant '" + std::string(variant_name(variant)) +
                                    "' requires a symbol map");
    }
    if (variant == PromptVariant::Plain && symbol_map != nullptr) {
        throw Error("plain variant takes no symbol map");
    }
    if (symbol_map != nullptr) {
        std::unordered_set<std::string> present;
        for (const auto& d : demos.items) present.insert(d.intent_id);
        for (const auto& d : demos.items) {
            if (!symbol_map->covers(d.intent_id)) {
                throw Error("symbol map is missing intent '" + d.intent_id + "'");
            }
        }
        for (const auto& [sym, intent] : symbol_map->entries()) {
            if (!present.count(intent)) {
                throw Error("symbol map lists intent '" + intent +
                            "' absent from the demonstrations");
            }
        }
    }

    std::string out;
    out += "# Task Description\n";
    out += instruction;

    out += "\n\n# Examples\n";
    for (std::size_t i = 0; i < demos.items.size(); ++i) {
        if (i > 0) out += '\n';
        out += example_line(demos.items[i], variant, symbol_map, catalog);
    }

    if (variant == PromptVariant::Symbolic) {
        out += "\n\n# Intent options\n";
        bool first = true;
        for (const auto& [sym, intent] : symbol_map->entries()) {
            if (!first) out += '\n';
            first = false;
            out += sym;
            out += " is ";
            out += catalog.label_of(intent);
        }
    }

    out += "\n\n# Note\n";
    for (std::size_t i = 0; i < note_lines().size(); ++i) {
        if (i > 0) out += '\n';
        out += note_lines()[i];
    }

    out += "\n\n# Context\n";
    const auto ctx = context_lines(session, variant);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (i > 0) out += '\n';
        out += ctx[i];
    }

    out += "\n\n# Output\nASSISTANT: [Intent]";

    RenderedPrompt prompt;
    prompt.text = std::move(out);
    prompt.variant = variant;
    if (symbol_map != nullptr) prompt.symbol_map = *symbol_map;
    prompt.candidate_intents = demos.candidate_order;
    prompt.demo_token_total = demos.token_total;
    prompt.pruned = demos.pruned;
    return prompt;
}

namespace {

std::string_view strip_intent_echo(std::string_view s) {
    constexpr std::string_view marker = "[Intent]";
    s = trim_view(s);
    if (s.substr(0, marker.size()) == marker) {
        s = trim_view(s.substr(marker.size()));
    }
    return s;
}

std::string lower(std::string_view s) { return to_lower_ascii(s); }

}  // namespace

std::optional<std::string> parse_generation(std::string_view raw, PromptVariant variant,
                                            const SymbolMap* symbol_map,
                                            const std::vector<std::string>& offered_intents,
                                            const IntentCatalog& catalog) {
    const std::string_view rest = strip_intent_echo(raw);
    if (rest.empty()) return std::nullopt;

    if (variant == PromptVariant::Plain) {
        for (const auto& intent : offered_intents) {
            if (catalog.label_of(intent) == rest) return intent;
        }
        const std::string folded = lower(trim_view(rest));
        for (const auto& intent : offered_intents) {
            if (lower(catalog.label_of(intent)) == folded) return intent;
        }
        return std::nullopt;
    }

    if (symbol_map == nullptr) {
        throw MissingSymbolMapError("cannot parse symbol output without a symbol map");
    }
    const auto intent = symbol_map->intent_for(rest.front());
    if (!intent) return std::nullopt;
    for (const auto& offered : offered_intents) {
        if (offered == *intent) return intent;
    }
    return std::nullopt;
}

std::string load_instruction_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open instruction file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    if (text.empty()) throw ParseError("instruction file is empty: " + path.string());
    return text;
}

std::string find_instruction(const std::filesystem::path& dir, PromptVariant variant,
                             std::string_view locale) {
    const std::string base(variant_name(variant));
    if (!locale.empty()) {
        const auto localized = dir / (base + "_" + std::string(locale) + ".txt");
        if (std::filesystem::exists(localized)) return load_instruction_file(localized);
    }
    const auto generic = dir / (base + ".txt");
    if (std::filesystem::exists(generic)) return load_instruction_file(generic);
    return default_instruction();
}

}  // namespace lara

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lara/catalog.hpp"
#include "lara/classifier.hpp"
#include "lara/retriever.hpp"

namespace lara {

enum class PromptVariant { Plain, Symbolic, Prepend, Formatted };

std::string_view variant_name(PromptVariant v);
PromptVariant parse_variant(std::string_view name);  // throws ConfigError

// Bijection between single-character symbols and intents. Symbols are drawn
// from A..Z, a..z, 0..9 in that order, so at most 62 intents fit one map.
class SymbolMap {
public:
    static constexpr std::string_view kAlphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

    // Intent i gets kAlphabet[i]. Throws TooManyIntentsError past 62.
    static SymbolMap make(const std::vector<std::string>& intents);

    std::size_t size() const { return entries_.size(); }
    const std::vector<std::pair<char, std::string>>& entries() const { return entries_; }

    std::optional<std::string> intent_for(char symbol) const;
    char symbol_for(std::string_view intent_id) const;  // throws UnknownIntentError
    bool covers(std::string_view intent_id) const;

private:
    std::vector<std::pair<char, std::string>> entries_;
};

struct RenderedPrompt {
    std::string text;
    PromptVariant variant = PromptVariant::Plain;
    std::optional<SymbolMap> symbol_map;
    std::vector<std::string> candidate_intents;
    long demo_token_total = 0;
    bool pruned = false;
};

// The appendix-derived defaults. The committed golden fixtures are the
// normative bytes: single LF line endings, one blank line between sections,
// no trailing newline.
std::string default_instruction();
const std::vector<std::string>& note_lines();

// One "# Examples" line for a demonstration under a variant.
//   Plain:            "[Content] <text> [Intent] <label>"
//   Symbolic:         "[Content] <text> [Intent] <symbol>"
//   Prepend/Formatted:"[Content] <text> [Intent] <symbol>><label>"
std::string example_line(const Demonstration& demo, PromptVariant variant,
                         const SymbolMap* symbol_map, const IntentCatalog& catalog);

// Deterministic byte-exact render. Section order: # Task Description,
// # Examples, # Intent options (Symbolic only), # Note, # Context, # Output.
// Demonstrations appear in set order (ascending score). The symbol map is
// required for every variant except Plain and must cover exactly the intents
// present in the demonstrations.
RenderedPrompt render(PromptVariant variant, std::string_view instruction,
                      const DemonstrationSet& demos, const Session& session,
                      const SymbolMap* symbol_map, const IntentCatalog& catalog);

// Maps an LLM continuation back to an offered intent. Plain matches label
// names (exact, then trimmed case-insensitive); the symbol variants look up
// the first non-whitespace character. A leading "[Intent]" echo is tolerated
// everywhere. No match returns nullopt and the caller falls back.
std::optional<std::string> parse_generation(std::string_view raw, PromptVariant variant,
                                            const SymbolMap* symbol_map,
                                            const std::vector<std::string>& offered_intents,
                                            const IntentCatalog& catalog);

// Instruction templates are plain-text files keyed by variant and locale:
// "<dir>/<variant>_<locale>.txt", falling back to "<dir>/<variant>.txt",
// then to the built-in default.
std::string load_instruction_file(const std::filesystem::path& path);
std::string find_instruction(const std::filesystem::path& dir, PromptVariant variant,
                             std::string_view locale);

}  // namespace lara

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lara {

// Greedy decoding contract: temperature is fixed at 0 in this artifact.
struct DecodeParams {
    int max_new_tokens = 32;
    float temperature = 0.0f;
    std::vector<std::string> stop_sequences;
};

struct GenerationResult {
    std::string text;  // may be empty; empty is treated as unmatched downstream
    long latency_ms = 0;
    std::string backend;
};

// Pluggable text-generation interface. Implementations must be safe for
// concurrent generate() calls.
class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;

    // Throws BackendUnavailableError / BackendRejectedError.
    virtual GenerationResult generate(const std::string& prompt,
                                      const DecodeParams& params) = 0;

    virtual std::string_view name() const = 0;
};

// Approximate token counter: whitespace-separated units plus ASCII
// punctuation characters. Bytes >= 0x80 count as word bytes so non-ASCII
// text is not penalized. Deterministic; pluggable via TokenCounter for
// backend-exact counting.
long count_tokens(std::string_view text);

using TokenCounter = std::function<long(std::string_view)>;

// Table mock keyed by exact prompt bytes (hashed), with a default response
// for unkeyed prompts. Configure fully before sharing across threads.
class ScriptedBackend final : public CompletionBackend {
public:
    ScriptedBackend() = default;
    explicit ScriptedBackend(std::string default_response)
        : default_response_(std::move(default_response)) {}

    void set_response(std::string_view prompt, std::string response);
    void set_default(std::string response) { default_response_ = std::move(response); }

    GenerationResult generate(const std::string& prompt, const DecodeParams& params) override;
    std::string_view name() const override { return "mock-scripted"; }

private:
    std::unordered_map<std::uint64_t, std::string> by_prompt_hash_;
    std::string default_response_;
};

// Emulates a competent in-context learner: scans the prompt's "# Examples"
// block and answers with the final (highest-similarity) demonstration's
// label, or with its symbol when the line carries one.
class SimilarityBackend final : public CompletionBackend {
public:
    GenerationResult generate(const std::string& prompt, const DecodeParams& params) override;
    std::string_view name() const override { return "mock-similarity"; }
};

}  // namespace lara

#pragma once

#include <memory>
#include <string>

#include "lara/embedder.hpp"
#include "lara/llm.hpp"

namespace lara {

struct HttpClientConfig {
    // Full URL of the completion endpoint, e.g. "http://host:8080/v1/completions".
    std::string endpoint;
    std::string api_key;  // sent as "Authorization: Bearer <key>" when non-empty
    int timeout_ms = 30000;
    int max_connections = 4;
    // Retries apply to transport failures (connect/timeout) only, with
    // exponential backoff; HTTP 4xx/5xx are surfaced immediately.
    int max_retries = 2;
    int backoff_base_ms = 100;
};

// Reads LARA_LLM_ENDPOINT, LARA_LLM_API_KEY, LARA_LLM_TIMEOUT_MS.
HttpClientConfig http_config_from_env();

// Generic completion-endpoint adapter.
// Request:  POST {"prompt", "max_tokens", "temperature", "stop"}
// Response: {"choices": [{"text": "..."}]}
class HttpCompletionBackend final : public CompletionBackend {
public:
    explicit HttpCompletionBackend(HttpClientConfig config);
    ~HttpCompletionBackend() override;

    GenerationResult generate(const std::string& prompt, const DecodeParams& params) override;
    std::string_view name() const override { return "http"; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Remote embedding adapter over the same transport.
// Request:  POST {"text": "..."}
// Response: {"vector": [..d floats..]}
class HttpEmbedder final : public Embedder {
public:
    HttpEmbedder(HttpClientConfig config, std::size_t dimension);
    ~HttpEmbedder() override;

    const EmbedderDescriptor& descriptor() const override { return descriptor_; }
    Embedding embed(std::string_view text) const override;

private:
    struct Impl;
    EmbedderDescriptor descriptor_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lara

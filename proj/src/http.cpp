#include "lara/http.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <semaphore>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "lara/error.hpp"
#include "lara/kernels.hpp"
#include "lara/text.hpp"

namespace lara {

using nlohmann::json;

HttpClientConfig http_config_from_env() {
    HttpClientConfig cfg;
    if (const char* v = std::getenv("LARA_LLM_ENDPOINT")) cfg.endpoint = v;
    if (const char* v = std::getenv("LARA_LLM_API_KEY")) cfg.api_key = v;
    if (const char* v = std::getenv("LARA_LLM_TIMEOUT_MS")) cfg.timeout_ms = std::atoi(v);
    return cfg;
}

namespace {

// Bounded pool of httplib clients; one client serves one in-flight request.
class ClientPool {
public:
    explicit ClientPool(HttpClientConfig cfg) : cfg_(std::move(cfg)), slots_(0) {
        if (cfg_.endpoint.empty()) throw ConfigError("HTTP endpoint is not configured");
        const auto scheme = cfg_.endpoint.find("://");
        if (scheme == std::string::npos) {
            throw ConfigError("endpoint must include a scheme: " + cfg_.endpoint);
        }
        const auto slash = cfg_.endpoint.find('/', scheme + 3);
        base_ = cfg_.endpoint.substr(0, slash);
        path_ = slash == std::string::npos ? "/" : cfg_.endpoint.substr(slash);
        if (cfg_.max_connections < 1) cfg_.max_connections = 1;
        slots_.release(cfg_.max_connections);
    }

    // Returns the response body for 2xx. Retries transport failures with
    // exponential backoff; surfaces HTTP errors immediately.
    std::string post_json(const std::string& body) {
        httplib::Error last_error = httplib::Error::Unknown;
        for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(
                    cfg_.backoff_base_ms << (attempt - 1)));
            }
            auto client = acquire();
            httplib::Headers headers;
            if (!cfg_.api_key.empty()) {
                headers.emplace("Authorization", "Bearer " + cfg_.api_key);
            }
            auto res = client->Post(path_, headers, body, "application/json");
            release(std::move(client));

            if (!res) {
                last_error = res.error();
                continue;
            }
            if (res->status < 200 || res->status >= 300) {
                throw BackendRejectedError("HTTP " + std::to_string(res->status) + ": " +
                                           res->body);
            }
            return res->body;
        }
        throw BackendUnavailableError("request failed after " +
                                      std::to_string(cfg_.max_retries + 1) + " attempts: " +
                                      httplib::to_string(last_error));
    }

private:
    std::unique_ptr<httplib::Client> acquire() {
        slots_.acquire();
        std::lock_guard lock(mu_);
        if (!idle_.empty()) {
            auto client = std::move(idle_.back());
            idle_.pop_back();
            return client;
        }
        auto client = std::make_unique<httplib::Client>(base_);
        client->set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client->set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client->set_write_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        return client;
    }

    void release(std::unique_ptr<httplib::Client> client) {
        {
            std::lock_guard lock(mu_);
            idle_.push_back(std::move(client));
        }
        slots_.release();
    }

    HttpClientConfig cfg_;
    std::string base_;
    std::string path_;
    std::counting_semaphore<> slots_;
    std::mutex mu_;
    std::vector<std::unique_ptr<httplib::Client>> idle_;
};

json parse_response(const std::string& body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) {
        throw BackendRejectedError("backend returned malformed JSON: " + body);
    }
    return parsed;
}

}  // namespace

struct HttpCompletionBackend::Impl {
    ClientPool pool;
};

HttpCompletionBackend::HttpCompletionBackend(HttpClientConfig config)
    : impl_(new Impl{ClientPool(std::move(config))}) {}

HttpCompletionBackend::~HttpCompletionBackend() = default;

GenerationResult HttpCompletionBackend::generate(const std::string& prompt,
                                                 const DecodeParams& params) {
    if (prompt.empty()) throw Error("prompt must be non-empty");
    if (params.max_new_tokens < 1) throw Error("max_new_tokens must be >= 1");

    const json body = {
        {"prompt", prompt},
        {"max_tokens", params.max_new_tokens},
        {"temperature", params.temperature},
        {"stop", params.stop_sequences},
    };

    const auto start = std::chrono::steady_clock::now();
    const json parsed = parse_response(impl_->pool.post_json(body.dump()));
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);

    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty() || !parsed["choices"][0].contains("text")) {
        throw BackendRejectedError("response lacks choices[0].text: " + parsed.dump());
    }
    return {parsed["choices"][0]["text"].get<std::string>(), elapsed.count(),
            std::string(name())};
}

struct HttpEmbedder::Impl {
    ClientPool pool;
};

HttpEmbedder::HttpEmbedder(HttpClientConfig config, std::size_t dimension)
    : impl_(new Impl{ClientPool(std::move(config))}) {
    if (dimension == 0) throw ConfigError("embedder dimension must be >= 1");
    descriptor_.name = "http";
    descriptor_.dimension = dimension;
}

HttpEmbedder::~HttpEmbedder() = default;

Embedding HttpEmbedder::embed(std::string_view text) const {
    if (trim_view(text).empty()) throw EmptyTextError("cannot embed empty text");

    const json body = {{"text", std::string(text)}};
    const json parsed = parse_response(impl_->pool.post_json(body.dump()));
    if (!parsed.contains("vector") || !parsed["vector"].is_array()) {
        throw BackendRejectedError("response lacks a vector field: " + parsed.dump());
    }

    Embedding out;
    out.values = parsed["vector"].get<std::vector<float>>();
    if (out.dim() != descriptor_.dimension) {
        throw DimensionMismatchError("remote returned dimension " +
                                     std::to_string(out.dim()) + ", expected " +
                                     std::to_string(descriptor_.dimension));
    }
    const float norm = kernels::l2_norm(out.data(), out.dim());
    if (!(norm > 0.0f) || !std::isfinite(norm)) {
        throw BackendRejectedError("remote returned a degenerate vector");
    }
    kernels::l2_normalize(out.values.data(), out.dim());
    return out;
}

}  // namespace lara

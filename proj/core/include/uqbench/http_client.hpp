#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "uqbench/model_client.hpp"

namespace uqbench {

struct HttpClientConfig {
    std::string base_url; // scheme://host[:port][/prefix]
    std::string model;
    std::string api_key;  // empty => taken from UQBENCH_API_KEY
    int max_inflight = 8;
    int max_attempts = 5; // total attempts, exponential backoff between them
    std::chrono::milliseconds backoff_base{1000};
    std::chrono::milliseconds backoff_cap{30000};
    std::chrono::seconds connect_timeout{10};
    std::chrono::seconds read_timeout{120};
    // Injected so retry tests run without real sleeps; default really sleeps.
    std::function<void(std::chrono::milliseconds)> sleep_fn;
};

// OpenAI-compatible chat-completions client. Requests top-2 per-token
// log-probs when asked; an endpoint that answers without them raises
// CapabilityError. Transport failures, 429, and 5xx retry with exponential
// backoff; anything else fails fast with TransportError.
class HttpModelClient final : public ModelClient {
public:
    explicit HttpModelClient(HttpClientConfig config);
    ~HttpModelClient() override;

    GenerationResult generate(const GenerationRequest& req) override;
    std::string model_id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Request body for POST /v1/chat/completions; exposed for tests.
std::string chat_completion_request_body(const GenerationRequest& req,
                                         const std::string& model);

// Pulls text + token log-probs out of a chat-completions response body.
// want_logprobs and absent/empty logprobs => CapabilityError.
GenerationResult parse_chat_completion_body(const std::string& body, bool want_logprobs);

} // namespace uqbench

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "uqbench/http_client.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "uqbench/errors.hpp"

namespace uqbench {

namespace {

using nlohmann::json;

class Semaphore {
public:
    explicit Semaphore(int slots) : slots_(slots) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [this] { return slots_ > 0; });
        --slots_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            ++slots_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int slots_;
};

struct SlotGuard {
    explicit SlotGuard(Semaphore& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
    Semaphore& sem;
};

bool retriable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

} // namespace

std::string chat_completion_request_body(const GenerationRequest& req,
                                         const std::string& model) {
    json body;
    body["model"] = model;
    body["messages"] = json::array({{{"role", "user"}, {"content", req.prompt}}});
    body["temperature"] = req.temperature;
    body["max_tokens"] = req.max_tokens;
    if (req.want_logprobs) {
        body["logprobs"] = true;
        body["top_logprobs"] = 2;
    }
    if (req.seed) {
        // The wire field is a signed integer; fold the 64-bit seed into it.
        body["seed"] = static_cast<std::int64_t>(*req.seed & 0x7fffffffull);
    }
    return body.dump();
}

GenerationResult parse_chat_completion_body(const std::string& body, bool want_logprobs) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw TransportError(std::string("response is not valid JSON: ") + e.what());
    }
    try {
        const auto& choices = j.at("choices");
        if (!choices.is_array() || choices.empty()) {
            throw TransportError("response carries no choices");
        }
        const auto& choice = choices[0];
        GenerationResult out;
        out.text = choice.at("message").at("content").is_null()
                       ? std::string()
                       : choice.at("message").at("content").get<std::string>();
        out.model_id = j.value("model", std::string());
        if (!want_logprobs) {
            return out;
        }
        if (!choice.contains("logprobs") || choice.at("logprobs").is_null()) {
            throw CapabilityError("endpoint returned no log-probs");
        }
        const auto& content = choice.at("logprobs").at("content");
        if (!content.is_array() || content.empty()) {
            throw CapabilityError("endpoint returned empty log-probs");
        }
        for (const auto& tok : content) {
            TokenLogProb t;
            t.token = tok.at("token").get<std::string>();
            t.top1_logprob = tok.at("logprob").get<double>(); // the emitted token's own log-prob
            const auto& alts = tok.at("top_logprobs");
            bool have_alt = false;
            double best_alt = 0.0;
            for (const auto& alt : alts) {
                if (alt.at("token").get<std::string>() == t.token) {
                    continue;
                }
                const double lp = alt.at("logprob").get<double>();
                if (!have_alt || lp > best_alt) {
                    have_alt = true;
                    best_alt = lp;
                }
            }
            if (!have_alt) {
                throw CapabilityError("endpoint returned no top-2 alternative");
            }
            t.top2_logprob = best_alt;
            out.tokens.push_back(std::move(t));
        }
        return out;
    } catch (const json::exception& e) {
        throw TransportError(std::string("response shape unexpected: ") + e.what());
    }
}

struct HttpModelClient::Impl {
    HttpClientConfig cfg;
    std::string host;   // scheme://host:port
    std::string prefix; // path prefix before /v1/chat/completions
    Semaphore inflight;

    explicit Impl(HttpClientConfig c) : cfg(std::move(c)), inflight(cfg.max_inflight) {}
};

HttpModelClient::HttpModelClient(HttpClientConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
    auto& cfg = impl_->cfg;
    if (cfg.base_url.empty()) {
        throw ConfigError("live client needs a base_url");
    }
    if (cfg.model.empty()) {
        throw ConfigError("live client needs a model id");
    }
    if (cfg.max_inflight < 1) {
        throw ConfigError("max_inflight must be >= 1");
    }
    if (cfg.api_key.empty()) {
        if (const char* env = std::getenv("UQBENCH_API_KEY")) {
            cfg.api_key = env;
        }
    }
    if (cfg.api_key.empty()) {
        throw ConfigError("UQBENCH_API_KEY is not set and no api_key configured");
    }
    if (!cfg.sleep_fn) {
        cfg.sleep_fn = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }

    std::string url = cfg.base_url;
    while (!url.empty() && url.back() == '/') {
        url.pop_back();
    }
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("base_url must include a scheme: " + cfg.base_url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        impl_->host = url;
    } else {
        impl_->host = url.substr(0, path_start);
        impl_->prefix = url.substr(path_start);
    }
}

HttpModelClient::~HttpModelClient() = default;

GenerationResult HttpModelClient::generate(const GenerationRequest& req) {
    auto& cfg = impl_->cfg;
    const std::string body = chat_completion_request_body(req, cfg.model);
    const std::string path = impl_->prefix + "/v1/chat/completions";

    std::string last_error;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        if (attempt > 0) {
            auto delay = cfg.backoff_base * (1 << (attempt - 1));
            cfg.sleep_fn(std::min<std::chrono::milliseconds>(delay, cfg.backoff_cap));
        }
        SlotGuard slot(impl_->inflight);
        httplib::Client cli(impl_->host);
        cli.set_connection_timeout(cfg.connect_timeout);
        cli.set_read_timeout(cfg.read_timeout);
        cli.set_bearer_token_auth(cfg.api_key);
        auto res = cli.Post(path, body, "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            GenerationResult out = parse_chat_completion_body(res->body, req.want_logprobs);
            if (out.model_id.empty()) {
                out.model_id = cfg.model;
            }
            return out;
        }
        if (retriable_status(res->status)) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    throw TransportError("gave up after " + std::to_string(cfg.max_attempts) +
                         " attempts; last error: " + last_error);
}

std::string HttpModelClient::model_id() const {
    return impl_->cfg.model;
}

} // namespace uqbench

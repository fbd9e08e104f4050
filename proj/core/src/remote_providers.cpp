// The only translation unit that talks to the network. Engine and pipeline
// code reach remote models exclusively through the provider interfaces.
#include "werewolf/remote_providers.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace werewolf {

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint must be a full URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string api_key_from_env(const std::string& var) {
    const char* key = std::getenv(var.c_str());
    return key ? key : "";
}

bool retriable_status(int status) {
    return status == 429 || status >= 500;
}

// Runs `send` up to policy.max_attempts times, backing off between tries.
nlohmann::json post_json_with_retry(httplib::Client& client, const std::string& path,
                                    const httplib::Headers& headers, const std::string& body,
                                    const RetryPolicy& policy, RateLimiter& limiter) {
    double delay_ms = policy.backoff_initial_ms;
    std::string last_error;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<long>(delay_ms)));
            delay_ms *= policy.backoff_factor;
        }
        auto ticket = limiter.acquire();
        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status == 200) {
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw ProviderError(std::string("malformed provider response: ") + e.what());
            }
        }
        last_error = "HTTP " + std::to_string(res->status);
        if (!retriable_status(res->status))
            throw ProviderError(last_error + ": " + res->body.substr(0, 256));
    }
    throw ProviderError("exhausted retries: " + last_error);
}

}  // namespace

struct RateLimiter::Impl {
    RateLimit limit;
    std::mutex mutex;
    std::condition_variable cv;
    int inflight = 0;
    std::deque<std::chrono::steady_clock::time_point> recent;
};

RateLimiter::RateLimiter(RateLimit limit) : impl_(new Impl{}) { impl_->limit = limit; }
RateLimiter::~RateLimiter() = default;

RateLimiter::Ticket RateLimiter::acquire() {
    using clock = std::chrono::steady_clock;
    std::unique_lock lock(impl_->mutex);
    for (;;) {
        auto now = clock::now();
        while (!impl_->recent.empty() && now - impl_->recent.front() > std::chrono::minutes(1))
            impl_->recent.pop_front();
        bool inflight_ok = impl_->limit.max_inflight <= 0 ||
                           impl_->inflight < impl_->limit.max_inflight;
        bool rate_ok = impl_->limit.requests_per_minute <= 0 ||
                       static_cast<int>(impl_->recent.size()) < impl_->limit.requests_per_minute;
        if (inflight_ok && rate_ok) break;
        if (!rate_ok) {
            impl_->cv.wait_until(lock, impl_->recent.front() + std::chrono::minutes(1));
        } else {
            impl_->cv.wait(lock);
        }
    }
    ++impl_->inflight;
    impl_->recent.push_back(clock::now());
    return Ticket(this);
}

void RateLimiter::release() {
    {
        std::lock_guard lock(impl_->mutex);
        --impl_->inflight;
    }
    impl_->cv.notify_all();
}

RateLimiter::Ticket::~Ticket() {
    if (limiter_) limiter_->release();
}

struct RemoteChat::Impl {
    RemoteChatConfig config;
    ParsedUrl url;
    httplib::Client client;
    RateLimiter limiter;

    explicit Impl(RemoteChatConfig cfg)
        : config(std::move(cfg)),
          url(split_url(config.endpoint)),
          client(url.origin),
          limiter(config.limit) {
        client.set_connection_timeout(config.timeout_seconds);
        client.set_read_timeout(config.timeout_seconds);
    }
};

RemoteChat::RemoteChat(RemoteChatConfig config) : impl_(new Impl(std::move(config))) {}
RemoteChat::~RemoteChat() = default;

std::string RemoteChat::chat(const ChatRequest& request) {
    nlohmann::json body;
    body["model"] = impl_->config.model;
    body["temperature"] = request.effective_temperature();
    body["max_tokens"] = request.max_output;
    auto& messages = body["messages"] = nlohmann::json::array();
    for (const auto& [role, content] : request.messages)
        messages.push_back({{"role", role}, {"content", content}});

    httplib::Headers headers;
    std::string key = api_key_from_env(impl_->config.api_key_env);
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    auto json = post_json_with_retry(impl_->client, impl_->url.path, headers, body.dump(),
                                     impl_->config.retry, impl_->limiter);
    try {
        return json.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("unexpected chat response shape: ") + e.what());
    }
}

struct RemoteEmbed::Impl {
    RemoteEmbedConfig config;
    RateLimiter limiter;
    std::mutex mutex;
    std::map<std::string, std::unique_ptr<httplib::Client>> clients;

    explicit Impl(RemoteEmbedConfig cfg) : config(std::move(cfg)), limiter(config.limit) {}

    httplib::Client& client_for(const std::string& origin) {
        std::lock_guard lock(mutex);
        auto& c = clients[origin];
        if (!c) {
            c = std::make_unique<httplib::Client>(origin);
            c->set_connection_timeout(config.timeout_seconds);
            c->set_read_timeout(config.timeout_seconds);
        }
        return *c;
    }
};

RemoteEmbed::RemoteEmbed(RemoteEmbedConfig config) : impl_(new Impl(std::move(config))) {}
RemoteEmbed::~RemoteEmbed() = default;

std::vector<double> RemoteEmbed::embed(const EmbeddingSpace& space, const std::string& text) {
    auto it = impl_->config.spaces.find(space.id);
    if (it == impl_->config.spaces.end())
        throw ConfigError("no remote backend configured for embedding space " + space.id);
    ParsedUrl url = split_url(it->second.endpoint);

    nlohmann::json body;
    body["model"] = it->second.model.empty() ? space.model : it->second.model;
    body["input"] = text;

    httplib::Headers headers;
    std::string key = api_key_from_env(impl_->config.api_key_env);
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    auto json = post_json_with_retry(impl_->client_for(url.origin), url.path, headers,
                                     body.dump(), impl_->config.retry, impl_->limiter);
    std::vector<double> v;
    try {
        v = json.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("unexpected embedding response shape: ") + e.what());
    }
    normalize(v);
    return v;
}

}  // namespace werewolf

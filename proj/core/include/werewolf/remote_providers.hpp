#pragma once

#include <map>

#include "werewolf/providers.hpp"

namespace werewolf {

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_initial_ms = 250;
    double backoff_factor = 2.0;
};

struct RateLimit {
    int requests_per_minute = 0;  // 0 = unlimited
    int max_inflight = 4;
};

struct RemoteChatConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-3.5-turbo-0301";
    std::string api_key_env = "OPENAI_API_KEY";
    int timeout_seconds = 60;
    RetryPolicy retry;
    RateLimit limit;
};

struct RemoteEmbedConfig {
    // Endpoint + model per embedding space id, so alternates are drop-in.
    struct SpaceBackend {
        std::string endpoint = "https://api.openai.com/v1/embeddings";
        std::string model;
    };
    std::map<std::string, SpaceBackend> spaces;
    std::string api_key_env = "OPENAI_API_KEY";
    int timeout_seconds = 60;
    RetryPolicy retry;
    RateLimit limit;
};

// Token-bucket limiter shared by a provider's calls; also bounds the number
// of in-flight requests.
class RateLimiter {
public:
    explicit RateLimiter(RateLimit limit);
    ~RateLimiter();
    class Ticket {
    public:
        explicit Ticket(RateLimiter* limiter) : limiter_(limiter) {}
        ~Ticket();
        Ticket(const Ticket&) = delete;
        Ticket& operator=(const Ticket&) = delete;

    private:
        RateLimiter* limiter_;
    };
    Ticket acquire();

private:
    friend class Ticket;
    void release();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Speaks the chat-completions HTTP contract. Retries transient failures with
// exponential backoff; the API key comes from the configured env var.
class RemoteChat : public ChatProvider {
public:
    explicit RemoteChat(RemoteChatConfig config);
    ~RemoteChat() override;
    std::string chat(const ChatRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class RemoteEmbed : public EmbeddingProvider {
public:
    explicit RemoteEmbed(RemoteEmbedConfig config);
    ~RemoteEmbed() override;
    std::vector<double> embed(const EmbeddingSpace& space, const std::string& text) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace werewolf

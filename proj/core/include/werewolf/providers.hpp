#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "werewolf/types.hpp"

namespace werewolf {

// Identifies one model call within a round, for replay keying and call logs.
struct TurnKey {
    int round = 0;
    int day = 1;
    Phase phase = Phase::Night;
    PlayerId speaker = 0;
    std::string step;  // "select_questions", "answer:3", "reflect", "response", ...

    std::string to_string() const;
};

enum class CallTag { CoT, Auxiliary };

struct ChatRequest {
    std::vector<std::pair<std::string, std::string>> messages;  // (role, content)
    CallTag tag = CallTag::Auxiliary;
    std::optional<double> temperature;  // defaulted by tag when unset
    int max_output = 512;
    std::optional<TurnKey> key;
    // Legal option strings for action prompts ("Player 3", "pass", "Yes").
    // Offline simulators act on these; remote backends only see the text.
    std::vector<std::string> options;

    // 0.0 for the final chain-of-thought response, 0.3 for everything else.
    double effective_temperature() const {
        if (temperature) return *temperature;
        return tag == CallTag::CoT ? 0.0 : 0.3;
    }
    const std::string& last_text() const;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    // Throws ProviderError when the backend cannot answer.
    virtual std::string chat(const ChatRequest& request) = 0;
};

struct EmbeddingSpace {
    std::string id;     // "qa" or "experience"
    std::string model;  // backend model identifier
    int dimension = 64;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    // Returns a unit-normalized vector of the space's dimension.
    virtual std::vector<double> embed(const EmbeddingSpace& space, const std::string& text) = 0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
// Cosine similarity; vectors must share a space (same dimension).
double cosine(const std::vector<double>& a, const std::vector<double>& b);
void normalize(std::vector<double>& v);

// Thread-safe record of provider traffic, used to assert pipeline wiring
// (ablations remove exactly their calls, pool building never extracts, ...).
class CallLog {
public:
    struct ChatEntry {
        TurnKey key;
        CallTag tag;
        double temperature;
    };

    void record_chat(const ChatRequest& request);
    void record_embed(const std::string& space_id);

    std::vector<ChatEntry> chat_entries() const;
    long chat_count() const;
    long chat_count_with_step(const std::string& step_prefix) const;
    long embed_count(const std::string& space_id) const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::vector<ChatEntry> chat_;
    std::vector<std::string> embeds_;
};

// Pass-through wrappers that feed the call log.
class LoggedChat : public ChatProvider {
public:
    LoggedChat(std::shared_ptr<ChatProvider> inner, std::shared_ptr<CallLog> log)
        : inner_(std::move(inner)), log_(std::move(log)) {}
    std::string chat(const ChatRequest& request) override {
        log_->record_chat(request);
        return inner_->chat(request);
    }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::shared_ptr<CallLog> log_;
};

class LoggedEmbed : public EmbeddingProvider {
public:
    LoggedEmbed(std::shared_ptr<EmbeddingProvider> inner, std::shared_ptr<CallLog> log)
        : inner_(std::move(inner)), log_(std::move(log)) {}
    std::vector<double> embed(const EmbeddingSpace& space, const std::string& text) override {
        log_->record_embed(space.id);
        return inner_->embed(space, text);
    }

private:
    std::shared_ptr<EmbeddingProvider> inner_;
    std::shared_ptr<CallLog> log_;
};

}  // namespace werewolf

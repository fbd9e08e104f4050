#pragma once

#include <deque>
#include <map>
#include <set>

#include "werewolf/message.hpp"
#include "werewolf/providers.hpp"

namespace werewolf {

// Deterministic agent stand-in. Action prompts are answered with a legal
// choice parsed from the option list in the prompt itself; everything else
// (questions, answers, reflections, talk) gets canned text. Every reply is a
// pure function of (seed, turn key), so call order and threading never change
// the outcome.
class ScriptedChat : public ChatProvider {
public:
    enum class Strategy {
        UniformRandom,  // uniform over the rendered options, pass included
        FirstTarget,    // first living player other than self, never pass
    };

    explicit ScriptedChat(std::uint64_t seed, Strategy strategy = Strategy::UniformRandom)
        : seed_(seed), strategy_(strategy) {}

    std::string chat(const ChatRequest& request) override;

private:
    std::uint64_t seed_;
    Strategy strategy_;
};

// Feeds back a recorded round. Player lines are keyed by (day, phase,
// speaker) and returned in transcript order; a missing line is a fixture
// error, never a silent fallback.
class ReplayChat : public ChatProvider {
public:
    explicit ReplayChat(const std::vector<Message>& transcript);

    std::string chat(const ChatRequest& request) override;

private:
    std::map<std::tuple<int, Phase, PlayerId>, std::deque<std::string>> lines_;
    std::mutex mutex_;
};

// Token-hash pseudo-embedding: each lowercase token contributes a seeded
// pseudo-random direction, the sum is unit-normalized. Stable across runs and
// platforms; test/offline use only.
class HashEmbed : public EmbeddingProvider {
public:
    explicit HashEmbed(std::uint64_t seed = 0) : seed_(seed) {}

    std::vector<double> embed(const EmbeddingSpace& space, const std::string& text) override;

private:
    std::uint64_t seed_;
    std::mutex mutex_;
    std::map<std::pair<std::string, std::string>, std::vector<double>> cache_;
};

// Wraps a provider and fails selected calls, for degradation tests.
class FaultInjectingChat : public ChatProvider {
public:
    FaultInjectingChat(std::shared_ptr<ChatProvider> inner, std::set<long> fail_calls)
        : inner_(std::move(inner)), fail_calls_(std::move(fail_calls)) {}
    // Seeded random failure with the given rate.
    FaultInjectingChat(std::shared_ptr<ChatProvider> inner, double fail_rate, std::uint64_t seed)
        : inner_(std::move(inner)), fail_rate_(fail_rate), seed_(seed) {}

    std::string chat(const ChatRequest& request) override;
    long calls_seen() const;

private:
    std::shared_ptr<ChatProvider> inner_;
    std::set<long> fail_calls_;
    double fail_rate_ = 0.0;
    std::uint64_t seed_ = 0;
    mutable std::mutex mutex_;
    long counter_ = 0;
};

// Optional response cache keyed by the request content; makes remote
// experiments resumable when backed by a file. Off by default in configs.
class CachingChat : public ChatProvider {
public:
    explicit CachingChat(std::shared_ptr<ChatProvider> inner, std::string cache_path = "");

    std::string chat(const ChatRequest& request) override;

private:
    std::shared_ptr<ChatProvider> inner_;
    std::string path_;
    std::mutex mutex_;
    std::map<std::string, std::string> cache_;
};

}  // namespace werewolf

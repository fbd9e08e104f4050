#pragma once

#include "werewolf/metrics.hpp"
#include "werewolf/remote_providers.hpp"
#include "werewolf/runner.hpp"

namespace werewolf {

// Everything one experiment needs, parsed from a flat key = value file.
struct ExperimentConfig {
    GameConfig game;
    PipelineParams pipeline;
    AblationMask ablation;
    std::set<Role> experience_sides = {Role::Villager, Role::Seer, Role::Guard, Role::Witch};
    int rounds = 50;
    int pool_build_rounds = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_dir = "out";
    std::string data_dir;  // question bank / templates location ("" = default)
    std::string label;

    // Providers: "scripted-uniform", "scripted-first" or "remote" chat;
    // "hash" or "remote" embeddings.
    std::string chat_provider = "scripted-uniform";
    std::string embed_provider = "hash";
    int embed_dimension = 64;
    bool cache_responses = false;
    std::string cache_path;
    RemoteChatConfig remote_chat;
    RemoteEmbedConfig remote_embed;
    std::string qa_model = "multi-qa-mpnet-base-cos-v1";
    std::string experience_model = "all-mpnet-base-v2";

    void validate() const;            // throws ConfigError
    std::string fingerprint() const;  // stable hash over behavior-relevant keys

    static ExperimentConfig from_string(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
    void apply(const std::string& key, const std::string& value);  // one assignment
};

struct ProviderSet {
    Providers providers;
    std::shared_ptr<CallLog> log;
};

// Builds chat/embed providers per the config, wrapped with the call log.
ProviderSet make_providers(const ExperimentConfig& config);

struct ExperimentResult {
    MetricsReport report;
    std::vector<RoundRecord> records;
};

// Runs `rounds` pool-building rounds (suggestions disabled, roles
// re-randomized per round) and finalizes each into the returned pool in
// round order. Aborted rounds are skipped and logged in `skipped`.
ExperiencePool build_pool(const ExperimentConfig& config, int rounds, const ProviderSet& providers,
                          int first_round_id = 0, std::vector<int>* skipped = nullptr);

// Runs the evaluation rounds with suggestion gating and aggregates metrics.
ExperimentResult run_experiment(const ExperimentConfig& config, const ProviderSet& providers,
                                const ExperiencePool* pool, int first_round_id = 1000);

// Seeded uniform sample of k response messages with short context windows,
// one JSON object per line. Throws ConfigError when fewer than k exist.
// The labeled form samples across variants and tags each row.
void export_annotation_sample(
    const std::vector<std::pair<std::string, const std::vector<RoundRecord>*>>& labeled, int k,
    std::uint64_t seed, const std::string& path);
void export_annotation_sample(const std::vector<RoundRecord>& records, int k, std::uint64_t seed,
                              const std::string& path, const std::string& variant_label = "");

}  // namespace werewolf

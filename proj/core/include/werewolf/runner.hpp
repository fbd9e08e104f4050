#pragma once

#include "werewolf/cognition.hpp"
#include "werewolf/experience.hpp"
#include "werewolf/moderator.hpp"
#include "werewolf/transcript.hpp"

namespace werewolf {

struct PipelineParams {
    int recent_window = 15;       // K
    int informative_top = 10;     // N
    int select_count = 5;         // L
    int ask_count = 2;            // M
    int evidence_top = 5;         // T
    double similarity_threshold = 0.85;
    int retrieval_cap = 50;
    int median_count = 5;         // n in the extraction slice
    int max_reprompts = 2;        // illegal/unparseable replies before forcing pass
};

struct Providers {
    std::shared_ptr<ChatProvider> chat;
    std::shared_ptr<EmbeddingProvider> embed;
    EmbeddingSpace qa_space{"qa", "multi-qa-mpnet-base-cos-v1", 64};
    EmbeddingSpace experience_space{"experience", "all-mpnet-base-v2", 64};
};

// Full runs the compact-context pipeline for every speaking turn; Direct
// sends only the moderator instruction (replay and fast simulations).
enum class PipelineMode { Full, Direct };

struct RunnerOptions {
    PipelineParams pipeline;
    AblationMask ablation;
    std::set<Role> experience_sides = {Role::Villager, Role::Seer, Role::Guard, Role::Witch};
    PipelineMode mode = PipelineMode::Full;
    bool use_suggestions = true;  // off while a pool is being built
};

class RoundRunner {
public:
    RoundRunner(Providers providers, QuestionBank bank, PromptTemplates templates,
                RunnerOptions options);

    // Drives one round to completion. `pool` may be null (no experience).
    // Provider failures degrade to legal defaults; anything else marks the
    // round invalid.
    RoundRecord run(const GameConfig& config, int round_id, const ExperiencePool* pool) const;

private:
    struct TurnOutput {
        Action action;
        std::string talk;
        std::string reflection;
        std::optional<std::string> suggestion;
    };

    TurnOutput run_turn(const Moderator& moderator, const ModeratorInstruction& instr,
                        const ShortTermMemory& memory, const ExperiencePool* pool,
                        int round_id) const;
    TurnOutput direct_turn(const ModeratorInstruction& instr, int round_id) const;
    static Action default_action(const ModeratorInstruction& instr);
    static std::string default_text(const Action& action);

    Providers providers_;
    QuestionBank bank_;
    PromptTemplates templates_;
    RunnerOptions options_;
};

// Collects one experience per (agent, day) from the record's turns (the
// day-talk pair when present, otherwise the agent's last turn that day),
// scores them with score_round and appends everything to the pool.
void finalize_round(ExperiencePool& pool, const RoundRecord& record, EmbeddingProvider& embed,
                    const EmbeddingSpace& space);

}  // namespace werewolf

#pragma once

#include <map>
#include <set>

#include "werewolf/config.hpp"
#include "werewolf/message.hpp"

namespace werewolf {

// What one agent produced on one speaking turn, with the pipeline artifacts
// that fed it. `suggestion` is set only when part 3 was in the prompt.
struct TurnInfo {
    PlayerId player = 0;
    int day = 1;
    Phase phase = Phase::Night;
    std::string step;        // action kind of the turn ("talk", "wolf_vote", ...)
    std::optional<PlayerId> target;  // resolved action target, if any
    std::string reflection;  // R, empty when the pipeline is off or R ablated
    std::string response;    // G, the concise talking content
    std::optional<std::string> suggestion;  // S

    bool operator==(const TurnInfo&) const = default;
};

// Transcript + outcome of one full round. Carries the engine config it was
// played under, so a record replays without external context.
struct RoundRecord {
    int round_id = 0;
    std::string config_fingerprint;
    std::uint64_t seed = 0;
    GameConfig game;
    std::map<PlayerId, Role> roles;
    std::vector<PlayerId> talk_order;
    std::vector<Message> transcript;
    std::vector<TurnInfo> turns;
    std::optional<Victory> outcome;  // unset only for aborted rounds
    int t_max = 0;
    bool valid = true;

    // Players on the winning side (dead or alive); empty on cutoff.
    std::set<PlayerId> winning_players() const;
    bool won_by(PlayerId id) const { return winning_players().count(id) > 0; }

    void save_jsonl(const std::string& path) const;
    std::string to_jsonl() const;
    static RoundRecord load_jsonl(const std::string& path);
    static RoundRecord parse_jsonl(const std::string& content);

    // Human-readable transcript with per-segment banners.
    std::string to_pretty() const;
};

// Re-runs the engine over the recorded responses and checks that the stored
// outcome, duration and role assignment match. Throws FixtureError on drift.
void verify_record(const RoundRecord& record);

}  // namespace werewolf

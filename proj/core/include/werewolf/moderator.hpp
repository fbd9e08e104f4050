#pragma once

#include <map>
#include <string>
#include <vector>

#include "werewolf/engine.hpp"

namespace werewolf {

// One moderator utterance: either a pure broadcast (actor unset) or a
// request for a specific player's action. `audience` empty means everyone;
// `response_audience` says who hears the reply (day talk is public even
// though the prompt addresses one player).
struct ModeratorInstruction {
    int day = 1;
    Segment segment = Segment::Init;
    std::vector<PlayerId> audience;
    std::vector<PlayerId> response_audience;
    std::optional<PlayerId> actor;
    ActionKind expected = ActionKind::Talk;
    std::vector<PlayerId> legal_targets;
    bool pass_allowed = true;
    std::vector<std::string> options;  // rendered option strings, empty for talk
    std::string text;
};

// Renders "[Player 1, Player 2, ..., pass]".
std::string render_options(const std::vector<PlayerId>& ids, bool with_pass);

// Drives one round through the canonical sequence: night open, wolf votes in
// talk order, guard, witch, seer, dawn announcements, free talk, day votes,
// elimination and last words. Callers pull instructions with current(),
// answer action requests via submit() and acknowledge broadcasts via
// advance(). submit() validates before mutating, so an IllegalActionError
// leaves the machine on the same instruction for a re-prompt.
class Moderator {
public:
    Moderator(GameConfig config, int round_id);

    bool finished() const { return finished_; }
    const ModeratorInstruction& current() const;
    bool awaiting_response() const;
    void advance();
    void submit(const Action& action);

    std::optional<Victory> result() const { return victory_; }
    // Day index the round ended on (valid once finished).
    int t_max() const { return t_max_; }
    const GameState& state() const { return state_; }
    const GameConfig& config() const { return config_; }

private:
    enum class Stage {
        GameStart,
        RoleAssign,
        NightOpen,
        WolfVotes,
        GuardStep,
        WitchStep,
        SeerStep,
        SeerReveal,
        Sunrise,
        DeathAnnounce,
        TalkRound,
        VoteRound,
        ElimAnnounce,
        GameOver,
        Finished,
    };

    void emit_broadcast(Segment segment, std::vector<PlayerId> audience, std::string text);
    void emit_request(Segment segment, std::vector<PlayerId> audience, PlayerId actor,
                      ActionKind expected, std::vector<PlayerId> legal, std::string text,
                      std::vector<PlayerId> response_audience = {});
    void enter_stage(Stage stage);
    void next_after(Stage done);

    void begin_night();
    void prompt_wolf();
    void prompt_guard_or_skip();
    void prompt_witch_or_skip();
    void prompt_seer_or_skip();
    void begin_dawn();
    void announce_next_death();
    void check_dawn_victory();
    void prompt_talk();
    void prompt_vote();
    void resolve_votes();
    void finish_day();
    void finish_game(Victory v);

    std::vector<PlayerId> living_options() const;

    GameConfig config_;
    GameState state_;
    ModeratorInstruction current_;
    Stage stage_ = Stage::GameStart;
    bool finished_ = false;
    std::optional<Victory> victory_;
    int t_max_ = 0;

    std::size_t cursor_ = 0;                 // index within iterating stages
    std::vector<PlayerId> stage_actors_;     // actors for the current stage
    std::map<PlayerId, Action> wolf_votes_;
    std::map<PlayerId, Action> day_votes_;
    std::optional<PlayerId> poison_victim_;
    std::optional<PlayerId> seer_target_;
    std::optional<PlayerId> eliminated_;
    std::vector<PlayerId> deaths_to_announce_;
    bool witch_antidote_question_ = false;
};

}  // namespace werewolf

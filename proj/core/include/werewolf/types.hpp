#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace werewolf {

// Players are numbered 1..N. Id 0 is reserved for the moderator.
using PlayerId = int;
inline constexpr PlayerId kModerator = 0;

enum class Role { Werewolf, Villager, Seer, Guard, Witch };
inline constexpr Role kAllRoles[] = {Role::Werewolf, Role::Villager, Role::Seer,
                                     Role::Guard, Role::Witch};

enum class Side { Wolf, Villager };

inline Side side_of(Role r) {
    return r == Role::Werewolf ? Side::Wolf : Side::Villager;
}

std::string role_name(Role r);              // "werewolf", "villager", ...
std::optional<Role> role_from_name(const std::string& name);
std::string side_name(Side s);              // "werewolf", "villager"

enum class Phase { Night, Day };
std::string phase_name(Phase p);

// Transcript segment: the pre-night setup block renders differently from
// night (confidential) and day (open) traffic.
enum class Segment { Init, Night, Day };
std::string segment_name(Segment s);
std::optional<Segment> segment_from_name(const std::string& name);

enum class Victory { WolfSide, VillagerSide, Cutoff };
std::string victory_name(Victory v);

enum class ActionKind {
    WolfVote,
    Protect,
    Poison,
    Antidote,
    Verify,
    DayVote,
    Talk,
    LastWords,
};
std::string action_kind_name(ActionKind k);

// One agent decision. `target` is empty for pass; `yes` is only meaningful
// for Antidote; `text` carries free-form talk.
struct Action {
    ActionKind kind = ActionKind::Talk;
    std::optional<PlayerId> target;
    bool yes = false;
    std::string text;

    static Action pass(ActionKind kind) { return Action{kind, std::nullopt, false, ""}; }
    static Action with_target(ActionKind kind, PlayerId id) {
        return Action{kind, id, false, ""};
    }
    static Action antidote(bool yes) {
        return Action{ActionKind::Antidote, std::nullopt, yes, ""};
    }
    static Action talk(ActionKind kind, std::string text) {
        return Action{kind, std::nullopt, false, std::move(text)};
    }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllegalActorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllegalActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnparseableReplyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FixtureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

std::string player_name(PlayerId id);  // "Player 3", "Moderator"

}  // namespace werewolf

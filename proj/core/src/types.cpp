#include "werewolf/types.hpp"

namespace werewolf {

std::string role_name(Role r) {
    switch (r) {
        case Role::Werewolf: return "werewolf";
        case Role::Villager: return "villager";
        case Role::Seer: return "seer";
        case Role::Guard: return "guard";
        case Role::Witch: return "witch";
    }
    throw InvariantError("unknown role");
}

std::optional<Role> role_from_name(const std::string& name) {
    for (Role r : kAllRoles) {
        if (role_name(r) == name) return r;
    }
    return std::nullopt;
}

std::string side_name(Side s) {
    return s == Side::Wolf ? "werewolf" : "villager";
}

std::string phase_name(Phase p) {
    return p == Phase::Night ? "night" : "day";
}

std::string segment_name(Segment s) {
    switch (s) {
        case Segment::Init: return "init";
        case Segment::Night: return "night";
        case Segment::Day: return "day";
    }
    throw InvariantError("unknown segment");
}

std::optional<Segment> segment_from_name(const std::string& name) {
    if (name == "init") return Segment::Init;
    if (name == "night") return Segment::Night;
    if (name == "day") return Segment::Day;
    return std::nullopt;
}

std::string victory_name(Victory v) {
    switch (v) {
        case Victory::WolfSide: return "wolf_side";
        case Victory::VillagerSide: return "villager_side";
        case Victory::Cutoff: return "cutoff";
    }
    throw InvariantError("unknown victory");
}

std::string action_kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::WolfVote: return "wolf_vote";
        case ActionKind::Protect: return "protect";
        case ActionKind::Poison: return "poison";
        case ActionKind::Antidote: return "antidote";
        case ActionKind::Verify: return "verify";
        case ActionKind::DayVote: return "day_vote";
        case ActionKind::Talk: return "talk";
        case ActionKind::LastWords: return "last_words";
    }
    throw InvariantError("unknown action kind");
}

std::string player_name(PlayerId id) {
    if (id == kModerator) return "Moderator";
    return "Player " + std::to_string(id);
}

}  // namespace werewolf

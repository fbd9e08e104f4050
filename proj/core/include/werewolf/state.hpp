#pragma once

#include <set>
#include <vector>

#include "werewolf/config.hpp"
#include "werewolf/types.hpp"

namespace werewolf {

struct Player {
    PlayerId id = 0;
    Role role = Role::Villager;
    bool alive = true;
};

// Full referee state for one round. Confined to a single round runner;
// never shared across threads.
struct GameState {
    std::vector<Player> players;  // index i holds player id i+1
    int day = 1;
    Phase phase = Phase::Night;
    std::vector<PlayerId> talk_order;  // fixed at round start
    std::optional<PlayerId> pending_kill;
    std::optional<PlayerId> guard_last_target;     // previous night's choice
    std::optional<PlayerId> guard_target_tonight;  // set during the current night
    bool witch_antidote_available = true;
    bool witch_poison_available = true;
    std::vector<PlayerId> deaths_tonight;  // ascending ids, reset at night start
    int round_id = 0;

    const Player& player(PlayerId id) const { return players.at(static_cast<size_t>(id - 1)); }
    Player& player(PlayerId id) { return players.at(static_cast<size_t>(id - 1)); }

    bool is_alive(PlayerId id) const { return player(id).alive; }
    Role role_of(PlayerId id) const { return player(id).role; }

    std::vector<PlayerId> living_ids() const;
    std::vector<PlayerId> living_with_role(Role r) const;
    // Living players ordered by talk_order, optionally restricted to a role.
    std::vector<PlayerId> living_in_talk_order() const;
    std::vector<PlayerId> living_wolves_in_talk_order() const;
    int living_count() const;
};

struct NightOutcome {
    std::set<PlayerId> killed;
    enum class Block { Guard, Antidote };
    std::optional<Block> wolf_kill_blocked_by;
    std::optional<std::pair<PlayerId, bool>> seer_result;  // (target, is_werewolf)
};

}  // namespace werewolf

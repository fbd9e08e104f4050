#pragma once

#include <cstdint>
#include <map>

#include "werewolf/types.hpp"

namespace werewolf {

enum class DayVoteRule { StrictMajority, Plurality };
std::string day_vote_rule_name(DayVoteRule r);
std::optional<DayVoteRule> day_vote_rule_from_name(const std::string& name);

struct GameConfig {
    // Role composition; the classic 7-player table by default.
    std::map<Role, int> role_counts = {
        {Role::Werewolf, 2}, {Role::Villager, 2}, {Role::Seer, 1},
        {Role::Guard, 1},    {Role::Witch, 1},
    };
    // Hard bound on round length. Must stay < 1000 so winner experience
    // scores (1000 - t_max) always exceed loser scores (t_max).
    int max_days = 10;
    bool strict_guard_rule = true;
    DayVoteRule day_vote_rule = DayVoteRule::StrictMajority;
    std::uint64_t rng_seed = 0;

    int player_count() const;
    int count(Role r) const;

    // Throws ConfigError on violation.
    void validate() const;
};

}  // namespace werewolf

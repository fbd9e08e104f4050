#include "werewolf/config.hpp"

namespace werewolf {

std::string day_vote_rule_name(DayVoteRule r) {
    return r == DayVoteRule::StrictMajority ? "strict_majority" : "plurality";
}

std::optional<DayVoteRule> day_vote_rule_from_name(const std::string& name) {
    if (name == "strict_majority") return DayVoteRule::StrictMajority;
    if (name == "plurality") return DayVoteRule::Plurality;
    return std::nullopt;
}

int GameConfig::player_count() const {
    int n = 0;
    for (const auto& [role, count] : role_counts) n += count;
    return n;
}

int GameConfig::count(Role r) const {
    auto it = role_counts.find(r);
    return it == role_counts.end() ? 0 : it->second;
}

void GameConfig::validate() const {
    for (const auto& [role, n] : role_counts) {
        if (n < 0) throw ConfigError("negative count for role " + role_name(role));
    }
    if (count(Role::Werewolf) < 1) throw ConfigError("at least one werewolf required");
    int villager_side = player_count() - count(Role::Werewolf);
    if (villager_side < 1) throw ConfigError("at least one villager-side player required");
    if (max_days < 1) throw ConfigError("max_days must be positive");
    if (max_days >= 1000) {
        // Experience scores are 1000 - t_max for winners and t_max for
        // losers; the bound keeps winners strictly ahead.
        throw ConfigError("max_days must be < 1000");
    }
}

}  // namespace werewolf

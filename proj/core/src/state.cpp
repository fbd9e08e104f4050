#include "werewolf/state.hpp"

#include <algorithm>

namespace werewolf {

std::vector<PlayerId> GameState::living_ids() const {
    std::vector<PlayerId> out;
    for (const auto& p : players)
        if (p.alive) out.push_back(p.id);
    return out;
}

std::vector<PlayerId> GameState::living_with_role(Role r) const {
    std::vector<PlayerId> out;
    for (const auto& p : players)
        if (p.alive && p.role == r) out.push_back(p.id);
    return out;
}

std::vector<PlayerId> GameState::living_in_talk_order() const {
    std::vector<PlayerId> out;
    for (PlayerId id : talk_order)
        if (is_alive(id)) out.push_back(id);
    return out;
}

std::vector<PlayerId> GameState::living_wolves_in_talk_order() const {
    std::vector<PlayerId> out;
    for (PlayerId id : talk_order)
        if (is_alive(id) && role_of(id) == Role::Werewolf) out.push_back(id);
    return out;
}

int GameState::living_count() const {
    return static_cast<int>(
        std::count_if(players.begin(), players.end(), [](const Player& p) { return p.alive; }));
}

}  // namespace werewolf

#include "werewolf/engine.hpp"

#include <algorithm>

#include "werewolf/rng.hpp"

namespace werewolf {

GameState new_round(const GameConfig& config, int round_id) {
    config.validate();
    SplitMix64 rng(mix_seed(config.rng_seed, static_cast<std::uint64_t>(round_id)));

    std::vector<Role> roles;
    for (Role r : kAllRoles)
        for (int i = 0; i < config.count(r); ++i) roles.push_back(r);
    rng.shuffle(roles);

    GameState state;
    state.round_id = round_id;
    state.players.reserve(roles.size());
    for (std::size_t i = 0; i < roles.size(); ++i)
        state.players.push_back(Player{static_cast<PlayerId>(i + 1), roles[i], true});

    state.talk_order.resize(roles.size());
    for (std::size_t i = 0; i < roles.size(); ++i)
        state.talk_order[i] = static_cast<PlayerId>(i + 1);
    rng.shuffle(state.talk_order);

    state.day = 1;
    state.phase = Phase::Night;
    return state;
}

std::optional<PlayerId> resolve_wolf_vote(const GameState& state,
                                          const std::map<PlayerId, Action>& votes) {
    for (const auto& [voter, action] : votes) {
        if (!state.is_alive(voter) || state.role_of(voter) != Role::Werewolf)
            throw IllegalActorError("wolf vote from " + player_name(voter));
        if (action.kind != ActionKind::WolfVote)
            throw IllegalActionError("expected a wolf vote");
    }
    std::optional<PlayerId> agreed;
    for (PlayerId wolf : state.living_with_role(Role::Werewolf)) {
        auto it = votes.find(wolf);
        if (it == votes.end()) throw IllegalActorError("missing vote from " + player_name(wolf));
        const auto& target = it->second.target;
        if (!target) return std::nullopt;  // pass breaks consensus
        if (!state.is_alive(*target)) return std::nullopt;
        if (agreed && *agreed != *target) return std::nullopt;
        agreed = *target;
    }
    return agreed;
}

void apply_guard(GameState& state, PlayerId actor, const Action& action, bool strict_rule) {
    if (!state.is_alive(actor) || state.role_of(actor) != Role::Guard)
        throw IllegalActorError(player_name(actor) + " is not the living guard");
    if (action.kind != ActionKind::Protect) throw IllegalActionError("expected a protect action");
    if (action.target) {
        if (!state.is_alive(*action.target))
            throw IllegalActionError("cannot protect a dead player");
        if (strict_rule && state.guard_last_target && *state.guard_last_target == *action.target)
            throw IllegalActionError("guard cannot protect the same player on consecutive nights");
    }
    state.guard_target_tonight = action.target;
}

namespace night {

void begin(GameState& state) {
    state.phase = Phase::Night;
    state.pending_kill.reset();
    state.guard_target_tonight.reset();
    state.deaths_tonight.clear();
}

void set_wolf_target(GameState& state, std::optional<PlayerId> target) {
    if (target && !state.is_alive(*target))
        throw IllegalActionError("wolf target must be alive");
    state.pending_kill = target;
}

bool guard_blocks(GameState& state) {
    if (state.pending_kill && state.guard_target_tonight &&
        *state.pending_kill == *state.guard_target_tonight) {
        state.pending_kill.reset();
        return true;
    }
    return false;
}

void apply_deaths(GameState& state, std::optional<PlayerId> poison_victim) {
    std::vector<PlayerId> dying;
    if (state.pending_kill) dying.push_back(*state.pending_kill);
    if (poison_victim && (!state.pending_kill || *poison_victim != *state.pending_kill))
        dying.push_back(*poison_victim);
    std::sort(dying.begin(), dying.end());
    for (PlayerId id : dying) {
        state.player(id).alive = false;
        state.deaths_tonight.push_back(id);
    }
    state.pending_kill.reset();
}

void end(GameState& state) {
    // Protection history rotates exactly once per night.
    state.guard_last_target = state.guard_target_tonight;
    state.guard_target_tonight.reset();
    state.phase = Phase::Day;
}

}  // namespace night

NightOutcome resolve_night(GameState& state, std::optional<PlayerId> wolf_target,
                           std::optional<PlayerId> protect, const Action& witch_action,
                           std::optional<PlayerId> seer_target) {
    if (state.phase != Phase::Night) throw IllegalActionError("resolve_night outside night phase");
    NightOutcome outcome;
    night::begin(state);
    night::set_wolf_target(state, wolf_target);

    state.guard_target_tonight = protect;
    if (night::guard_blocks(state)) outcome.wolf_kill_blocked_by = NightOutcome::Block::Guard;

    std::optional<PlayerId> poison_victim;
    switch (witch_action.kind) {
        case ActionKind::Antidote:
            if (witch_action.yes) {
                if (!state.witch_antidote_available)
                    throw IllegalActionError("antidote already spent");
                if (!state.pending_kill)
                    throw IllegalActionError("no pending kill for the antidote");
                state.witch_antidote_available = false;
                state.pending_kill.reset();
                outcome.wolf_kill_blocked_by = NightOutcome::Block::Antidote;
            }
            break;
        case ActionKind::Poison:
            if (witch_action.target) {
                if (!state.witch_poison_available) throw IllegalActionError("poison already spent");
                if (!state.is_alive(*witch_action.target))
                    throw IllegalActionError("poison target must be alive");
                state.witch_poison_available = false;
                poison_victim = witch_action.target;
            }
            break;
        default:
            if (witch_action.target || witch_action.yes)
                throw IllegalActionError("unexpected witch action");
            break;
    }

    night::apply_deaths(state, poison_victim);
    for (PlayerId id : state.deaths_tonight) outcome.killed.insert(id);

    if (seer_target) {
        auto seers = state.living_with_role(Role::Seer);
        if (!seers.empty() && state.is_alive(*seer_target))
            outcome.seer_result = {*seer_target, state.role_of(*seer_target) == Role::Werewolf};
    }

    night::end(state);
    return outcome;
}

std::optional<PlayerId> resolve_day_vote(const GameState& state,
                                         const std::map<PlayerId, Action>& votes,
                                         DayVoteRule rule) {
    std::map<PlayerId, int> tally;
    for (const auto& [voter, action] : votes) {
        if (!state.is_alive(voter)) throw IllegalActorError("vote from dead " + player_name(voter));
        if (action.kind != ActionKind::DayVote) throw IllegalActionError("expected a day vote");
        if (!action.target) continue;  // abstain
        if (!state.is_alive(*action.target))
            throw IllegalActionError("vote for dead " + player_name(*action.target));
        ++tally[*action.target];
    }
    if (tally.empty()) return std::nullopt;

    auto best = std::max_element(tally.begin(), tally.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    if (rule == DayVoteRule::StrictMajority) {
        if (2 * best->second > state.living_count()) return best->first;
        return std::nullopt;
    }
    // Plurality: the maximum must be unique.
    int winners = 0;
    for (const auto& [target, n] : tally)
        if (n == best->second) ++winners;
    return winners == 1 ? std::optional<PlayerId>(best->first) : std::nullopt;
}

std::optional<Victory> check_victory(const GameState& state, const GameConfig& config) {
    int wolves = 0;
    int plain_villagers = 0;
    for (const auto& p : state.players) {
        if (!p.alive) continue;
        if (p.role == Role::Werewolf) ++wolves;
        if (p.role == Role::Villager) ++plain_villagers;
    }
    // Villagers need a survivor to claim the win, so the wolf condition is
    // checked first.
    if (plain_villagers == 0) return Victory::WolfSide;
    if (wolves == 0) return Victory::VillagerSide;
    if (state.day > config.max_days) return Victory::Cutoff;
    return std::nullopt;
}

}  // namespace werewolf

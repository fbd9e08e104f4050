#pragma once

#include <map>

#include "werewolf/state.hpp"

namespace werewolf {

// Seeded round setup: uniform role assignment over player ids plus a uniform
// talk-order permutation, both derived from (config.rng_seed, round_id).
GameState new_round(const GameConfig& config, int round_id);

// Consensus rule: a target is returned iff every living wolf named the same
// living player; any pass or disagreement yields no kill.
// Throws IllegalActorError when votes come from dead or non-wolf players or
// when a living wolf is missing from the map.
std::optional<PlayerId> resolve_wolf_vote(const GameState& state,
                                          const std::map<PlayerId, Action>& votes);

// Records tonight's protection. Under the strict rule a repeat of last
// night's target is rejected with IllegalActionError.
void apply_guard(GameState& state, PlayerId actor, const Action& action, bool strict_rule);

// Sequential night resolution: wolves -> guard -> witch -> seer. Mutates
// state (deaths applied, potions consumed, guard bookkeeping rotated) and
// returns what happened. `witch_action` must be Antidote, Poison or a pass
// of either kind; at most one potion is spent per night.
NightOutcome resolve_night(GameState& state, std::optional<PlayerId> wolf_target,
                           std::optional<PlayerId> protect, const Action& witch_action,
                           std::optional<PlayerId> seer_target);

// Day elimination. StrictMajority: strictly more than half of living players;
// Plurality: unique maximum. Ties and abstention-heavy maps eliminate no one.
// Throws IllegalActionError on votes for dead players, IllegalActorError on
// votes from dead players.
std::optional<PlayerId> resolve_day_vote(const GameState& state,
                                         const std::map<PlayerId, Action>& votes,
                                         DayVoteRule rule);

// Villager side wins when no wolf lives; wolf side when no plain villager
// lives (checked first, since villagers need a survivor to claim the win);
// Cutoff when the day counter passes config.max_days.
std::optional<Victory> check_victory(const GameState& state, const GameConfig& config);

// Night-phase bookkeeping helpers used by both resolve_night and the
// interactive moderator, so the two paths cannot drift apart.
namespace night {

void begin(GameState& state);
void set_wolf_target(GameState& state, std::optional<PlayerId> target);
// True when the pending kill was cancelled by tonight's protection.
bool guard_blocks(GameState& state);
// Finalizes pending kill + poison victim into deaths; clears pending_kill.
void apply_deaths(GameState& state, std::optional<PlayerId> poison_victim);
void end(GameState& state);

}  // namespace night

}  // namespace werewolf

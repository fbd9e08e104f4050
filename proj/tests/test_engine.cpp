#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "test_support.hpp"
#include "werewolf/engine.hpp"
#include "werewolf/moderator.hpp"
#include "werewolf/rng.hpp"

using namespace werewolf;
using werewolf::testing::golden_config;
using werewolf::testing::kGoldenSeed;

namespace {

GameState golden_state() { return new_round(golden_config(), 0); }

std::map<PlayerId, Action> wolf_votes(std::initializer_list<std::pair<PlayerId, PlayerId>> votes,
                                      std::initializer_list<PlayerId> passers = {}) {
    std::map<PlayerId, Action> out;
    for (auto [voter, target] : votes) out[voter] = Action::with_target(ActionKind::WolfVote, target);
    for (PlayerId voter : passers) out[voter] = Action::pass(ActionKind::WolfVote);
    return out;
}

}  // namespace

TEST_CASE("new_round deals the configured role counts") {
    GameConfig config;
    config.rng_seed = 1;
    GameState state = new_round(config, 0);
    REQUIRE(state.players.size() == 7);
    int wolves = 0;
    for (const auto& p : state.players) wolves += p.role == Role::Werewolf;
    CHECK(wolves == 2);
    CHECK(state.day == 1);
    CHECK(state.phase == Phase::Night);
    CHECK(state.witch_antidote_available);
    CHECK(state.witch_poison_available);
    CHECK(!state.pending_kill);
}

TEST_CASE("new_round is deterministic in (seed, round)") {
    GameConfig config;
    config.rng_seed = 99;
    GameState a = new_round(config, 3);
    GameState b = new_round(config, 3);
    for (std::size_t i = 0; i < a.players.size(); ++i)
        CHECK(a.players[i].role == b.players[i].role);
    CHECK(a.talk_order == b.talk_order);

    GameState c = new_round(config, 4);  // a different round reshuffles
    bool same_roles = true;
    for (std::size_t i = 0; i < a.players.size(); ++i)
        same_roles = same_roles && a.players[i].role == c.players[i].role;
    CHECK((!same_roles || a.talk_order != c.talk_order));
}

TEST_CASE("golden seed reproduces the recorded assignment") {
    GameState state = golden_state();
    CHECK(state.role_of(1) == Role::Werewolf);
    CHECK(state.role_of(2) == Role::Werewolf);
    CHECK(state.role_of(3) == Role::Villager);
    CHECK(state.role_of(4) == Role::Seer);
    CHECK(state.role_of(5) == Role::Guard);
    CHECK(state.role_of(6) == Role::Witch);
    CHECK(state.role_of(7) == Role::Villager);
    CHECK(state.talk_order == std::vector<PlayerId>{3, 1, 2, 7, 5, 4, 6});
}

TEST_CASE("new_round rejects invalid configs") {
    GameConfig config;
    config.role_counts[Role::Werewolf] = 0;
    CHECK_THROWS_AS(new_round(config, 0), ConfigError);
    config = GameConfig{};
    config.max_days = 1000;
    CHECK_THROWS_AS(new_round(config, 0), ConfigError);
}

TEST_CASE("resolve_wolf_vote needs full consensus") {
    GameState state = golden_state();
    CHECK(resolve_wolf_vote(state, wolf_votes({{1, 5}, {2, 5}})) == 5);
    CHECK(resolve_wolf_vote(state, wolf_votes({{1, 3}, {2, 7}})) == std::nullopt);
    CHECK(resolve_wolf_vote(state, wolf_votes({{1, 5}}, {2})) == std::nullopt);

    state.player(1).alive = false;  // sole wolf decides alone
    CHECK(resolve_wolf_vote(state, wolf_votes({{2, 3}})) == 3);
}

TEST_CASE("resolve_wolf_vote rejects illegal voters") {
    GameState state = golden_state();
    CHECK_THROWS_AS(resolve_wolf_vote(state, wolf_votes({{1, 5}, {2, 5}, {3, 5}})),
                    IllegalActorError);
    state.player(2).alive = false;
    CHECK_THROWS_AS(resolve_wolf_vote(state, wolf_votes({{1, 5}, {2, 5}})), IllegalActorError);
}

TEST_CASE("wolf consensus matches exhaustive enumeration") {
    // All vote maps for two wolves over targets {0=pass, 1..7}.
    GameState state = golden_state();
    for (int a = 0; a <= 7; ++a) {
        for (int b = 0; b <= 7; ++b) {
            std::map<PlayerId, Action> votes;
            votes[1] = a == 0 ? Action::pass(ActionKind::WolfVote)
                              : Action::with_target(ActionKind::WolfVote, a);
            votes[2] = b == 0 ? Action::pass(ActionKind::WolfVote)
                              : Action::with_target(ActionKind::WolfVote, b);
            auto result = resolve_wolf_vote(state, votes);
            bool expect_kill = a != 0 && a == b;
            CHECK(result.has_value() == expect_kill);
            if (expect_kill) CHECK(*result == a);
        }
    }
}

TEST_CASE("apply_guard enforces the consecutive-night rule only in strict mode") {
    GameState state = golden_state();
    state.guard_last_target = 4;
    CHECK_THROWS_AS(apply_guard(state, 5, Action::with_target(ActionKind::Protect, 4), true),
                    IllegalActionError);
    apply_guard(state, 5, Action::with_target(ActionKind::Protect, 4), false);
    CHECK(state.guard_target_tonight == 4);
    apply_guard(state, 5, Action::with_target(ActionKind::Protect, 3), true);
    CHECK(state.guard_target_tonight == 3);
    CHECK_THROWS_AS(apply_guard(state, 6, Action::with_target(ActionKind::Protect, 3), true),
                    IllegalActorError);
}

TEST_CASE("resolve_night: guard blocks the wolf kill") {
    GameState state = golden_state();
    auto outcome = resolve_night(state, 5, 5, Action::pass(ActionKind::Poison), 2);
    CHECK(outcome.killed.empty());
    CHECK(outcome.wolf_kill_blocked_by == NightOutcome::Block::Guard);
    REQUIRE(outcome.seer_result.has_value());
    CHECK(outcome.seer_result->first == 2);
    CHECK(outcome.seer_result->second);  // player 2 is a werewolf
    CHECK(state.is_alive(5));
    CHECK(state.phase == Phase::Day);
}

TEST_CASE("resolve_night: poison kills through a missed guard and shrinks the night") {
    GameState state = golden_state();
    auto outcome =
        resolve_night(state, std::nullopt, 3, Action::with_target(ActionKind::Poison, 1), 3);
    CHECK(outcome.killed == std::set<PlayerId>{1});
    CHECK(!state.is_alive(1));
    CHECK(!state.witch_poison_available);
    CHECK(state.witch_antidote_available);
    REQUIRE(outcome.seer_result.has_value());
    CHECK_FALSE(outcome.seer_result->second);
}

TEST_CASE("resolve_night: antidote cancels the pending kill") {
    GameState state = golden_state();
    auto outcome = resolve_night(state, 7, 4, Action::antidote(true), 3);
    CHECK(outcome.killed.empty());
    CHECK(outcome.wolf_kill_blocked_by == NightOutcome::Block::Antidote);
    CHECK(!state.witch_antidote_available);
    CHECK(state.witch_poison_available);
    CHECK(state.is_alive(7));
}

TEST_CASE("resolve_night rejects spent potions") {
    GameState state = golden_state();
    state.witch_poison_available = false;
    CHECK_THROWS_AS(
        resolve_night(state, std::nullopt, std::nullopt, Action::with_target(ActionKind::Poison, 1),
                      std::nullopt),
        IllegalActionError);
    state = golden_state();
    state.witch_antidote_available = false;
    CHECK_THROWS_AS(resolve_night(state, 7, std::nullopt, Action::antidote(true), std::nullopt),
                    IllegalActionError);
}

TEST_CASE("resolve_night: guard rotation happens exactly once per night") {
    GameState state = golden_state();
    resolve_night(state, std::nullopt, 4, Action::pass(ActionKind::Poison), std::nullopt);
    CHECK(state.guard_last_target == 4);
    CHECK(!state.guard_target_tonight);
    state.phase = Phase::Night;
    resolve_night(state, std::nullopt, std::nullopt, Action::pass(ActionKind::Poison),
                  std::nullopt);
    CHECK(!state.guard_last_target);
}

namespace {

std::map<PlayerId, Action> day_votes(const GameState& state, const std::map<PlayerId, int>& votes) {
    std::map<PlayerId, Action> out;
    for (PlayerId id : state.living_ids()) {
        auto it = votes.find(id);
        if (it == votes.end() || it->second == 0) {
            out[id] = Action::pass(ActionKind::DayVote);
        } else {
            out[id] = Action::with_target(ActionKind::DayVote, it->second);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("resolve_day_vote strict majority") {
    GameState state = golden_state();
    state.player(1).alive = false;
    state.player(3).alive = false;  // five living, like the golden day 5
    auto votes = day_votes(state, {{7, 2}, {5, 2}, {4, 2}, {6, 2}, {2, 7}});
    CHECK(resolve_day_vote(state, votes, DayVoteRule::StrictMajority) == 2);

    state = golden_state();
    state.player(1).alive = false;  // six living, like day 3
    votes = day_votes(state, {{7, 2}, {5, 7}, {6, 7}});
    CHECK(resolve_day_vote(state, votes, DayVoteRule::StrictMajority) == std::nullopt);

    votes = day_votes(state, {});
    CHECK(resolve_day_vote(state, votes, DayVoteRule::StrictMajority) == std::nullopt);
}

TEST_CASE("resolve_day_vote plurality") {
    GameState state = golden_state();
    state.player(1).alive = false;
    auto votes = day_votes(state, {{7, 2}, {5, 7}, {6, 7}});
    CHECK(resolve_day_vote(state, votes, DayVoteRule::Plurality) == 7);
    votes = day_votes(state, {{7, 2}, {5, 7}, {6, 2}, {4, 7}});
    CHECK(resolve_day_vote(state, votes, DayVoteRule::Plurality) == std::nullopt);  // tie
}

TEST_CASE("resolve_day_vote rejects votes for or from the dead") {
    GameState state = golden_state();
    state.player(1).alive = false;
    auto votes = day_votes(state, {{2, 3}});
    votes[2] = Action::with_target(ActionKind::DayVote, 1);
    CHECK_THROWS_AS(resolve_day_vote(state, votes, DayVoteRule::StrictMajority),
                    IllegalActionError);
    votes = day_votes(state, {});
    votes[1] = Action::pass(ActionKind::DayVote);
    CHECK_THROWS_AS(resolve_day_vote(state, votes, DayVoteRule::StrictMajority),
                    IllegalActorError);
}

TEST_CASE("day vote rules match brute-force oracles for up to 5 living players") {
    // Shrink to 5 living: players 1..5 of the golden round.
    GameState state = golden_state();
    state.player(6).alive = false;
    state.player(7).alive = false;
    const int living = 5;

    // Every voter picks one of {pass, P1..P5}: 6^5 maps.
    for (int code = 0; code < 6 * 6 * 6 * 6 * 6; ++code) {
        int c = code;
        std::map<PlayerId, Action> votes;
        std::map<PlayerId, int> tally;
        for (PlayerId voter = 1; voter <= living; ++voter) {
            int pick = c % 6;
            c /= 6;
            if (pick == 0) {
                votes[voter] = Action::pass(ActionKind::DayVote);
            } else {
                votes[voter] = Action::with_target(ActionKind::DayVote, pick);
                tally[pick] += 1;
            }
        }
        // Oracle: strict majority.
        std::optional<PlayerId> majority;
        for (const auto& [target, n] : tally)
            if (2 * n > living) majority = target;
        auto got = resolve_day_vote(state, votes, DayVoteRule::StrictMajority);
        REQUIRE(got == majority);
        if (got) CHECK(2 * tally[*got] > living);

        // Oracle: plurality with unique max.
        std::optional<PlayerId> plurality;
        int best = 0;
        int ties = 0;
        for (const auto& [target, n] : tally) {
            if (n > best) {
                best = n;
                plurality = target;
                ties = 1;
            } else if (n == best) {
                ++ties;
            }
        }
        if (ties != 1) plurality.reset();
        auto got_p = resolve_day_vote(state, votes, DayVoteRule::Plurality);
        REQUIRE(got_p == plurality);
    }
}

TEST_CASE("check_victory") {
    GameConfig config = golden_config();
    GameState state = golden_state();
    CHECK(check_victory(state, config) == std::nullopt);

    state.player(1).alive = false;
    state.player(2).alive = false;
    CHECK(check_victory(state, config) == Victory::VillagerSide);

    state = golden_state();
    state.player(3).alive = false;
    state.player(7).alive = false;
    CHECK(check_victory(state, config) == Victory::WolfSide);

    // Villagers need a survivor: with both target groups gone the wolves win.
    state.player(1).alive = false;
    state.player(2).alive = false;
    CHECK(check_victory(state, config) == Victory::WolfSide);

    state = golden_state();
    state.day = config.max_days + 1;
    CHECK(check_victory(state, config) == Victory::Cutoff);
}

TEST_CASE("moderator drives the canonical sequence for the golden night 1") {
    Moderator moderator(golden_config(), 0);

    // Initialization: game start + 7 role messages.
    CHECK(moderator.current().text.rfind("Now the game starts!", 0) == 0);
    moderator.advance();
    for (PlayerId id = 1; id <= 7; ++id) {
        CHECK(moderator.current().audience == std::vector<PlayerId>{id});
        moderator.advance();
    }
    CHECK(moderator.current().text ==
          "It's dark, everyone close your eyes. I will talk with you/your team secretly at "
          "night.");
    moderator.advance();

    // Wolves vote in talk order: P1 then P2.
    REQUIRE(moderator.awaiting_response());
    CHECK(moderator.current().actor == 1);
    CHECK(moderator.current().expected == ActionKind::WolfVote);
    CHECK(moderator.current().audience == std::vector<PlayerId>{1, 2});
    moderator.submit(Action::with_target(ActionKind::WolfVote, 5));
    CHECK(moderator.current().actor == 2);
    moderator.submit(Action::with_target(ActionKind::WolfVote, 5));

    // Guard, witch (poison question: the kill is already blocked), seer.
    CHECK(moderator.current().actor == 5);
    CHECK(moderator.current().expected == ActionKind::Protect);
    moderator.submit(Action::with_target(ActionKind::Protect, 5));
    CHECK(moderator.current().actor == 6);
    CHECK(moderator.current().expected == ActionKind::Poison);
    CHECK(moderator.current().text.find("bottle of poison") != std::string::npos);
    moderator.submit(Action::pass(ActionKind::Poison));
    CHECK(moderator.current().actor == 4);
    CHECK(moderator.current().expected == ActionKind::Verify);
    moderator.submit(Action::with_target(ActionKind::Verify, 2));
    CHECK(moderator.current().text == "Player 2 is a werewolf!");
    CHECK(moderator.current().audience == std::vector<PlayerId>{4});
    moderator.advance();

    CHECK(moderator.current().text ==
          "The sun rose. Everyone woke up except those who had been killed.");
    moderator.advance();
    CHECK(moderator.current().text == "It was a peaceful night and no one died!");
    moderator.advance();

    // Free talk starts with the first living player in talk order.
    REQUIRE(moderator.awaiting_response());
    CHECK(moderator.current().actor == 3);
    CHECK(moderator.current().expected == ActionKind::Talk);
}

TEST_CASE("moderator skips the witch entirely once both potions are spent") {
    GameConfig config = golden_config();
    Moderator moderator(config, 0);
    int witch_prompts = 0;
    SplitMix64 rng(7);
    while (!moderator.finished()) {
        if (!moderator.awaiting_response()) {
            moderator.advance();
            continue;
        }
        const auto& instr = moderator.current();
        if (instr.expected == ActionKind::Poison || instr.expected == ActionKind::Antidote)
            ++witch_prompts;
        // Answer with pass/no everywhere; the round runs to cutoff.
        switch (instr.expected) {
            case ActionKind::Antidote: moderator.submit(Action::antidote(false)); break;
            case ActionKind::Talk:
            case ActionKind::LastWords:
                moderator.submit(Action::talk(instr.expected, "..."));
                break;
            default: moderator.submit(Action::pass(instr.expected)); break;
        }
    }
    CHECK(moderator.result() == Victory::Cutoff);
    CHECK(moderator.t_max() == config.max_days);
    // Passing witch keeps her potions, so she is prompted every night.
    CHECK(witch_prompts == config.max_days);
}

TEST_CASE("liveness is monotone and kills are conserved across random rounds") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GameConfig config;
        config.rng_seed = seed;
        Moderator moderator(config, static_cast<int>(seed));
        SplitMix64 rng(seed * 31 + 7);
        std::set<PlayerId> dead;
        int living_before_night = 7;
        while (!moderator.finished()) {
            for (const auto& p : moderator.state().players)
                if (!p.alive) CHECK(dead.insert(p.id).second == (dead.count(p.id) == 0));
            // once dead, never alive again
            for (PlayerId id : dead) CHECK(!moderator.state().is_alive(id));

            if (moderator.state().phase == Phase::Night)
                living_before_night = moderator.state().living_count();
            else
                CHECK(living_before_night - moderator.state().living_count() <= 2);

            if (!moderator.awaiting_response()) {
                moderator.advance();
                continue;
            }
            const auto& instr = moderator.current();
            if (instr.expected == ActionKind::Talk || instr.expected == ActionKind::LastWords) {
                moderator.submit(Action::talk(instr.expected, "..."));
            } else if (instr.expected == ActionKind::Antidote) {
                moderator.submit(Action::antidote(rng.below(2) == 0));
            } else if (instr.legal_targets.empty() || rng.below(3) == 0) {
                moderator.submit(Action::pass(instr.expected));
            } else {
                moderator.submit(Action::with_target(
                    instr.expected,
                    instr.legal_targets[rng.below(instr.legal_targets.size())]));
            }
        }
        CHECK(moderator.result().has_value());
        CHECK(moderator.t_max() >= 1);
        CHECK(moderator.t_max() <= config.max_days);
    }
}

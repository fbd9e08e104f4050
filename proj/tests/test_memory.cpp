#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "test_support.hpp"
#include "werewolf/memory.hpp"
#include "werewolf/rng.hpp"

using namespace werewolf;

namespace {

Message msg(long seq, PlayerId speaker, const std::string& text,
            std::vector<PlayerId> audience = {}, MessageKind kind = MessageKind::System,
            Segment segment = Segment::Day) {
    Message m;
    m.seq = seq;
    m.day = 1;
    m.segment = segment;
    m.kind = kind;
    m.speaker = speaker;
    m.audience = std::move(audience);
    m.text = text;
    m.info_score = score_informativeness(m);
    return m;
}

int score_of(PlayerId speaker, const std::string& text) {
    return score_informativeness(msg(0, speaker, text));
}

}  // namespace

TEST_CASE("informativeness: rule 5, the agent receives its role") {
    CHECK(score_of(kModerator, "You are werewolf!") == 5);
    CHECK(score_of(kModerator, "You are witch!") == 5);
    CHECK(score_of(kModerator, "You are the best!") == 1);
}

TEST_CASE("informativeness: rule 4, eliminations") {
    CHECK(score_of(kModerator, "Player 1 died last night!") == 4);
    CHECK(score_of(kModerator, "Player 2 will be killed! You can make a brief last statement.") ==
          4);
    CHECK(score_of(kModerator, "It was a peaceful night and no one died!") == 1);
}

TEST_CASE("informativeness: rule 3, role uncovering and claims") {
    CHECK(score_of(kModerator, "Player 2 is a werewolf!") == 3);
    CHECK(score_of(kModerator, "Player 3 is not a werewolf!") == 3);
    CHECK(score_of(kModerator,
                   "Werewolves, please open your eyes! I secrecly tell you that Player 1, "
                   "Player 2 are all of the 2 werewolves! Keep in mind you are teammates.") == 3);
    CHECK(score_of(3, "As a villager, I still don't have any clear suspicions.") == 3);
    CHECK(score_of(6, "I am Player 6, the witch.") == 3);
    CHECK(score_of(4, "I verified that Player 3 is not a werewolf.") == 3);
    // Speculation needs a role noun and another player's name.
    CHECK(score_of(6, "Player 4 might be the seer based on the claims.") == 3);
    CHECK(score_of(6, "I think someone here is the seer.") == 1);
    // Moderator boilerplate naming players and roles is not an uncovering.
    CHECK(score_of(kModerator,
                   "The next werewolf, you Player 2, please vote and tell your teammates that "
                   "which of the players should be killed tonight.") == 1);
}

TEST_CASE("informativeness: rule 2, potion talk") {
    CHECK(score_of(kModerator,
                   "You witch, Player 6, please open your eyes! You have a bottle of poison, who "
                   "are you going to kill tonight?") == 2);
    CHECK(score_of(kModerator,
                   "Player 7 will be killed tonight. You have a bottle of antidote, do you want "
                   "to save him?") == 2);
    CHECK(score_of(6, "I used my antidote last night to save any player who might have been "
                      "targeted.") == 2);
    CHECK(score_of(6, "I choose to use my bottle of poison to kill Player 1.") == 2);
}

TEST_CASE("informativeness: rule 1, everything else") {
    CHECK(score_of(kModerator, "Hey everyone, good morning!") == 1);
    CHECK(score_of(kModerator, "It's dark, everyone close your eyes.") == 1);
    CHECK(score_of(kModerator, "The sun rose. Everyone woke up except those who had been "
                               "killed.") == 1);
    CHECK(score_of(kModerator, "Game over, the villager wins!") == 1);
}

TEST_CASE("informativeness is deterministic and always in 1..5") {
    SplitMix64 rng(4);
    const char* fragments[] = {"Player 3", "werewolf", "poison", "died last night!", "hello",
                               "You are seer!", "I am", "as a guard", "pass"};
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        int parts = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < parts; ++i) {
            text += fragments[rng.below(std::size(fragments))];
            text += " ";
        }
        Message m = msg(trial, static_cast<PlayerId>(rng.below(8)), text);
        int first = score_informativeness(m);
        CHECK(first >= 1);
        CHECK(first <= 5);
        CHECK(score_informativeness(m) == first);
    }
}

TEST_CASE("short-term memory keeps only what the owner can hear") {
    ShortTermMemory memory(3);
    CHECK(memory.append(msg(0, kModerator, "broadcast")));               // audible
    CHECK(!memory.append(msg(1, kModerator, "secret", {1, 2})));         // excluded
    CHECK(memory.append(msg(2, kModerator, "private", {3})));            // addressed
    CHECK(memory.append(msg(3, 5, "someone talks")));                    // observation
    CHECK(!memory.append(msg(4, 3, "own words", {}, MessageKind::Response)));
    CHECK(memory.append(msg(5, 3, "own reflection", {3}, MessageKind::Reflection)));

    for (const auto& m : memory.entries()) {
        bool own_reflection = m.speaker == 3 && m.kind == MessageKind::Reflection;
        CHECK((m.heard_by(3) || own_reflection));
    }
    CHECK(memory.entries().size() == 4);
}

TEST_CASE("recent_window equals slicing the chronological list") {
    SplitMix64 rng(11);
    ShortTermMemory memory(1);
    std::vector<Message> all;
    for (int i = 0; i < 200; ++i) {
        Message m = msg(i, kModerator, "m" + std::to_string(i));
        memory.append(m);
        all.push_back(m);
        int k = 1 + static_cast<int>(rng.below(30));
        auto window = recent_window(memory, k);
        std::size_t expect = std::min<std::size_t>(k, all.size());
        REQUIRE(window.size() == expect);
        for (std::size_t j = 0; j < window.size(); ++j)
            CHECK(window[j].seq == all[all.size() - expect + j].seq);
    }
    CHECK(recent_window(ShortTermMemory(1), 15).empty());
}

TEST_CASE("top_informative matches the brute-force sort oracle") {
    const char* by_score[] = {
        "hello there",                  // 1
        "the poison is ready",          // 2
        "Player 2 is a werewolf!",      // 3
        "Player 1 died last night!",    // 4
        "You are werewolf!",            // 5
    };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SplitMix64 rng(seed);
        ShortTermMemory memory(1);
        std::vector<Message> all;
        int n = 1 + static_cast<int>(rng.below(500));
        for (int i = 0; i < n; ++i) {
            Message m = msg(i, kModerator, by_score[rng.below(5)]);
            memory.append(m);
            all.push_back(m);
        }
        int top_n = 1 + static_cast<int>(rng.below(20));

        // Oracle: stable sort on (score desc, seq desc), take n, chronological.
        std::vector<Message> oracle = all;
        std::stable_sort(oracle.begin(), oracle.end(), [](const Message& a, const Message& b) {
            if (a.info_score != b.info_score) return a.info_score > b.info_score;
            return a.seq > b.seq;
        });
        oracle.resize(std::min<std::size_t>(top_n, oracle.size()));
        std::sort(oracle.begin(), oracle.end(),
                  [](const Message& a, const Message& b) { return a.seq < b.seq; });

        auto got = top_informative(memory, top_n);
        REQUIRE(got.size() == oracle.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].seq == oracle[i].seq);
    }
}

TEST_CASE("top_informative breaks score ties toward the newer message") {
    ShortTermMemory memory(1);
    memory.append(msg(0, kModerator, "Player 1 died last night!"));
    memory.append(msg(1, kModerator, "Player 2 died last night!"));
    auto got = top_informative(memory, 1);
    REQUIRE(got.size() == 1);
    CHECK(got[0].seq == 1);
}

TEST_CASE("message JSON round-trips") {
    Message m = msg(7, 4, "I verified that Player 3 is not a werewolf.", {1, 4},
                    MessageKind::Response, Segment::Night);
    Message back = Message::from_json(m.to_json());
    CHECK(back == m);

    Message all = msg(8, kModerator, "broadcast");
    CHECK(Message::from_json(all.to_json()) == all);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "test_support.hpp"
#include "werewolf/experience.hpp"
#include "werewolf/offline_providers.hpp"
#include "werewolf/rng.hpp"
#include "werewolf/runner.hpp"

using namespace werewolf;

namespace {

Experience exp_with(int score, int round, int day = 1, const std::string& text = "r") {
    Experience e;
    e.reflection = text + std::to_string(score) + "_" + std::to_string(round);
    e.response = "response " + std::to_string(score);
    e.score = score;
    e.round = round;
    e.day = day;
    e.role = Role::Villager;
    e.player = 1;
    e.embedding = {1.0, 0.0};
    return e;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

class FailingEmbed : public EmbeddingProvider {
public:
    std::vector<double> embed(const EmbeddingSpace&, const std::string&) override {
        throw ProviderError("down");
    }
};

// Returns a fixed unit vector per text, from a lookup.
class TableEmbed : public EmbeddingProvider {
public:
    std::map<std::string, std::vector<double>> table;
    std::vector<double> embed(const EmbeddingSpace&, const std::string& text) override {
        auto it = table.find(text);
        if (it == table.end()) throw ProviderError("no vector for " + text);
        return it->second;
    }
};

}  // namespace

TEST_CASE("score_round follows the win-fast/lose-slow rule") {
    CHECK(score_round(5, true) == 995);
    CHECK(score_round(5, false) == 5);
    CHECK(score_round(1, true) == 999);
    CHECK_THROWS_AS(score_round(0, true), InvariantError);
    CHECK_THROWS_AS(score_round(1000, false), InvariantError);
}

TEST_CASE("winners outscore losers for every t_max in range") {
    for (int t = 1; t <= 499; ++t) CHECK(score_round(t, true) > score_round(t, false));
}

TEST_CASE("pool append keeps entries immutable and version monotone") {
    ExperiencePool pool;
    pool.append_round(0, {exp_with(5, 0), exp_with(995, 0)}, "experience");
    CHECK(pool.version() == 1);
    CHECK(pool.size() == 2);
    auto first_two = pool.entries();

    pool.append_round(1, {exp_with(7, 1)}, "experience");
    CHECK(pool.version() == 2);
    CHECK(pool.size() == 3);
    // Prefix property: version 1's entries lead version 2's.
    CHECK(pool.entries()[0] == first_two[0]);
    CHECK(pool.entries()[1] == first_two[1]);
    CHECK(pool.provenance() == std::vector<int>{0, 1});

    CHECK_THROWS_AS(pool.append_round(2, {exp_with(1, 2)}, "qa"), InvariantError);
}

TEST_CASE("pool save/load is bit-exact") {
    ExperiencePool pool;
    std::vector<Experience> entries;
    SplitMix64 rng(9);
    HashEmbed embed(1);
    EmbeddingSpace space{"experience", "test", 16};
    for (int i = 0; i < 20; ++i) {
        Experience e = exp_with(static_cast<int>(rng.below(999)) + 1, 0, 1 + i % 5);
        e.embedding = embed.embed(space, e.reflection);
        entries.push_back(std::move(e));
    }
    pool.append_round(0, entries, "experience");

    std::string path = temp_path("pool_roundtrip.jsonl");
    pool.save(path);
    std::string bytes = werewolf::testing::read_file(path);

    ExperiencePool loaded = ExperiencePool::load(path);
    CHECK(loaded.version() == pool.version());
    CHECK(loaded.provenance() == pool.provenance());
    REQUIRE(loaded.size() == pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) CHECK(loaded.entries()[i] == pool.entries()[i]);

    std::string path2 = temp_path("pool_roundtrip2.jsonl");
    loaded.save(path2);
    CHECK(werewolf::testing::read_file(path2) == bytes);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("pool space mismatch is detected on load") {
    ExperiencePool pool;
    pool.append_round(0, {exp_with(5, 0)}, "experience");
    CHECK_NOTHROW(pool.check_space(EmbeddingSpace{"experience", "m", 2}));
    CHECK_THROWS_AS(pool.check_space(EmbeddingSpace{"qa", "m", 2}), ConfigError);
    CHECK_THROWS_AS(pool.check_space(EmbeddingSpace{"experience", "m", 64}), ConfigError);
}

TEST_CASE("retrieve_similar applies the threshold strictly") {
    TableEmbed embed;
    embed.table["query"] = {1.0, 0.0};
    ExperiencePool pool;
    Experience same = exp_with(10, 0);
    same.reflection = "identical";
    same.embedding = {1.0, 0.0};
    Experience orthogonal = exp_with(20, 0);
    orthogonal.reflection = "orthogonal";
    orthogonal.embedding = {0.0, 1.0};
    Experience close = exp_with(30, 0);
    close.reflection = "close";
    close.embedding = {0.9, std::sqrt(1.0 - 0.81)};
    pool.append_round(0, {same, orthogonal, close}, "experience");

    EmbeddingSpace space{"experience", "test", 2};
    auto subset = retrieve_similar(pool, "query", 0.85, 50, embed, space);
    REQUIRE(subset.size() == 2);
    CHECK(subset[0].reflection == "identical");  // similarity 1.0 first
    CHECK(subset[1].reflection == "close");

    // cos == threshold is excluded (strictly greater).
    auto none = retrieve_similar(pool, "query", 1.0, 50, embed, space);
    CHECK(none.empty());
}

TEST_CASE("retrieve_similar matches the brute-force filter+sort oracle") {
    EmbeddingSpace space{"experience", "test", 24};
    HashEmbed embed(17);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SplitMix64 rng(seed);
        ExperiencePool pool;
        std::vector<Experience> entries;
        for (int i = 0; i < 200; ++i) {
            Experience e = exp_with(static_cast<int>(rng.below(999)) + 1, 0);
            e.reflection = "token" + std::to_string(rng.below(25)) + " filler" +
                           std::to_string(rng.below(4));
            e.embedding = embed.embed(space, e.reflection);
            entries.push_back(std::move(e));
        }
        pool.append_round(0, entries, "experience");
        std::string query = "token" + std::to_string(rng.below(25));
        double threshold = 0.2 + 0.1 * static_cast<double>(rng.below(5));
        int cap = 1 + static_cast<int>(rng.below(60));

        auto got = retrieve_similar(pool, query, threshold, cap, embed, space);

        auto qv = embed.embed(space, query);
        std::vector<std::pair<double, std::size_t>> oracle;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            double sim = cosine(qv, entries[i].embedding);
            if (sim > threshold) oracle.emplace_back(sim, i);
        }
        std::stable_sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (oracle.size() > static_cast<std::size_t>(cap)) oracle.resize(cap);

        REQUIRE(got.size() == oracle.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i] == entries[oracle[i].second]);
            CHECK(cosine(qv, got[i].embedding) > threshold);
        }
    }
}

TEST_CASE("retrieve_similar degrades to empty on embedding failure") {
    FailingEmbed embed;
    ExperiencePool pool;
    pool.append_round(0, {exp_with(5, 0)}, "experience");
    CHECK(retrieve_similar(pool, "q", 0.85, 50, embed, EmbeddingSpace{"experience", "t", 2})
              .empty());
}

TEST_CASE("select_for_extraction: fixture cases") {
    // Scores [5, 5, 995, 995, 995]: the worst is the earliest 5, the slice
    // centers on the median of the rest.
    std::vector<Experience> subset = {exp_with(5, 0), exp_with(5, 1), exp_with(995, 2),
                                      exp_with(995, 3), exp_with(995, 4)};
    auto input = select_for_extraction(subset, 5);
    REQUIRE(input.has_value());
    CHECK(input->worst.round == 0);
    REQUIRE(input->median.size() == 4);
    // Median index of the 4 remaining (sorted 5,995,995,995) is 1 -> 995.
    CHECK(input->median[(input->median.size() - 1) / 2].score == 995);

    std::vector<Experience> two = {exp_with(5, 0), exp_with(995, 1)};
    auto pair = select_for_extraction(two, 5);
    REQUIRE(pair.has_value());
    CHECK(pair->worst.score == 5);
    REQUIRE(pair->median.size() == 1);
    CHECK(pair->median[0].score == 995);

    CHECK(!select_for_extraction({exp_with(5, 0)}, 5).has_value());
    CHECK(!select_for_extraction({}, 5).has_value());
}

TEST_CASE("select_for_extraction matches a sort oracle on random multisets") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SplitMix64 rng(seed);
        int n = 2 + static_cast<int>(rng.below(80));
        std::vector<Experience> subset;
        for (int i = 0; i < n; ++i)
            subset.push_back(exp_with(static_cast<int>(rng.below(999)) + 1, i));
        int n_median = 1 + static_cast<int>(rng.below(9));

        auto input = select_for_extraction(subset, n_median);
        REQUIRE(input.has_value());

        // Oracle: stable sort by score; worst is front; slice the rest
        // centered on the median index.
        std::vector<Experience> sorted = subset;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Experience& a, const Experience& b) { return a.score < b.score; });
        CHECK(input->worst == sorted.front());
        for (const auto& e : subset) CHECK(input->worst.score <= e.score);

        std::vector<Experience> rest(sorted.begin() + 1, sorted.end());
        std::size_t m = rest.size();
        std::size_t k = std::min<std::size_t>(n_median, m);
        std::size_t median = (m - 1) / 2;
        std::size_t start = median >= k / 2 ? median - k / 2 : 0;
        start = std::min(start, m - k);
        REQUIRE(input->median.size() == k);
        for (std::size_t i = 0; i < k; ++i) CHECK(input->median[i] == rest[start + i]);
    }
}

TEST_CASE("extract_suggestion renders the template and respects the sentinel") {
    ExtractionInput input;
    input.worst = exp_with(5, 0);
    input.worst.response = "I choose to pass.";
    input.median = {exp_with(995, 1), exp_with(995, 2)};
    input.median[0].response = "I choose to protect Player 4 tonight.";

    struct CapturingChat : ChatProvider {
        std::string reply;
        std::string last_prompt;
        std::string chat(const ChatRequest& request) override {
            last_prompt = request.messages.back().second;
            return reply;
        }
    } chat;
    PromptTemplates templates =
        PromptTemplates::load(std::string(WEREWOLF_SOURCE_DIR) + "/core/data/prompt_templates.json");
    TurnKey key{0, 1, Phase::Night, 6, "extract"};

    chat.reply = "The best way for you to do under such reflection is to use your drugs wisely "
                 "based on your observations and reflections.";
    auto suggestion = extract_suggestion(input, chat, templates, key);
    CHECK(suggestion.from_experience);
    CHECK(suggestion.text == chat.reply);
    CHECK(chat.last_prompt.find("There is one bad experience") != std::string::npos);
    CHECK(chat.last_prompt.find("I choose to pass.") != std::string::npos);
    CHECK(chat.last_prompt.find("I choose to protect Player 4 tonight.") != std::string::npos);

    chat.reply = "No useful experience can be used.";
    suggestion = extract_suggestion(input, chat, templates, key);
    CHECK(!suggestion.from_experience);
    CHECK(suggestion.text == kNoSuggestionSentinel);

    struct Down : ChatProvider {
        std::string chat(const ChatRequest&) override { throw ProviderError("down"); }
    } down;
    suggestion = extract_suggestion(input, down, templates, key);
    CHECK(suggestion.text == kNoSuggestionSentinel);
}

TEST_CASE("finalize_round on the golden record scores 995/5 by side") {
    RoundRecord record = werewolf::testing::load_golden_record();
    REQUIRE(record.outcome == Victory::VillagerSide);
    REQUIRE(record.t_max == 5);

    ExperiencePool pool;
    HashEmbed embed(0);
    EmbeddingSpace space{"experience", "test", 16};
    finalize_round(pool, record, embed, space);

    CHECK(!pool.empty());
    std::set<std::pair<PlayerId, int>> seen;
    for (const auto& e : pool.entries()) {
        bool winner = side_of(record.roles.at(e.player)) == Side::Villager;
        CHECK(e.score == (winner ? 995 : 5));
        CHECK(seen.insert({e.player, e.day}).second);  // one per (agent, day)
        CHECK(e.embedding == embed.embed(space, e.reflection));
    }
    // Wolves died on day 2 (P1) and day 5 (P2), so both sides contribute.
    bool any_wolf = false;
    for (const auto& e : pool.entries()) any_wolf |= e.role == Role::Werewolf;
    CHECK(any_wolf);
}

TEST_CASE("finalize_round rejects aborted rounds and accumulates as a union") {
    RoundRecord record = werewolf::testing::load_golden_record();
    ExperiencePool pool;
    HashEmbed embed(0);
    EmbeddingSpace space{"experience", "test", 16};
    finalize_round(pool, record, embed, space);
    std::size_t one_round = pool.size();

    RoundRecord second = record;
    second.round_id = 1;
    finalize_round(pool, second, embed, space);
    CHECK(pool.size() == 2 * one_round);
    CHECK(pool.provenance() == std::vector<int>{0, 1});
    CHECK(pool.version() == 2);

    RoundRecord aborted = record;
    aborted.valid = false;
    CHECK_THROWS_AS(finalize_round(pool, aborted, embed, space), InvariantError);
}

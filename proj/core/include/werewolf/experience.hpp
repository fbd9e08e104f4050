#pragma once

#include <set>

#include "werewolf/prompt_templates.hpp"
#include "werewolf/providers.hpp"
#include "werewolf/types.hpp"

namespace werewolf {

// One (reflection, response, score) tuple with provenance and the cached
// embedding of its reflection in the "experience" space.
struct Experience {
    std::string reflection;
    std::string response;
    int score = 0;
    int round = 0;
    int day = 1;
    Role role = Role::Villager;
    PlayerId player = 0;
    std::vector<double> embedding;

    bool operator==(const Experience&) const = default;
};

// Winners take 1000 - t_max, losers take t_max: win fast, or at least lose
// slowly. Requires 1 <= t_max < 1000 so winners always outscore losers.
int score_round(int t_max, bool agent_won);

// Append-only union of per-round experiences. Readers may share a const pool;
// writes happen only between rounds.
class ExperiencePool {
public:
    const std::vector<Experience>& entries() const { return entries_; }
    int version() const { return version_; }
    const std::vector<int>& provenance() const { return provenance_; }
    const std::string& space_id() const { return space_id_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    // Appends a finished round's experiences and bumps the version.
    void append_round(int round_id, std::vector<Experience> entries,
                      const std::string& space_id);

    // Versioned record file: one JSON header line, then one line per entry.
    // Reload is bit-exact (save(load(x)) == x).
    void save(const std::string& path) const;
    static ExperiencePool load(const std::string& path);
    // Detects pools embedded in a different space than the configured one.
    void check_space(const EmbeddingSpace& space) const;

private:
    std::vector<Experience> entries_;
    std::vector<int> provenance_;
    std::string space_id_;
    int version_ = 0;
};

// E_sub: pool entries whose reflection embedding has cosine similarity
// strictly above `threshold` with the query reflection; at most `cap`
// entries, most similar kept, ordered by (similarity desc, pool index asc).
// Embedding failure yields an empty subset.
std::vector<Experience> retrieve_similar(const ExperiencePool& pool, const std::string& reflection,
                                         double threshold, int cap, EmbeddingProvider& embed,
                                         const EmbeddingSpace& space);

struct ExtractionInput {
    Experience worst;                  // lowest score (ties: earliest appended)
    std::vector<Experience> median;    // up to n entries around the median score
};

// Picks the lowest-score entry and a median-centered slice of the rest
// (sorted by score ascending). Needs at least two entries.
std::optional<ExtractionInput> select_for_extraction(const std::vector<Experience>& subset,
                                                     int n_median = 5);

inline constexpr const char* kNoSuggestionSentinel = "No useful experience can be used.";

struct Suggestion {
    std::string text;  // a one-sentence directive or the exact sentinel
    bool from_experience = false;
};

// Renders the extraction prompt over the selected responses and returns the
// model's one-sentence directive, or the sentinel on failure / no signal.
Suggestion extract_suggestion(const ExtractionInput& input, ChatProvider& chat,
                              const PromptTemplates& templates, const TurnKey& key);

}  // namespace werewolf

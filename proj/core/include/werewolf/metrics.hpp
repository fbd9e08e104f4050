#pragma once

#include <map>
#include <set>

#include "werewolf/transcript.hpp"

namespace werewolf {

// Per-day trust matrix: cells[i][j] says player i substantively endorsed
// player j that day. `dissolved` lists pairs whose earlier trust lapsed with
// i acting against j.
struct TrustTable {
    int day = 1;
    int players = 7;
    std::set<std::pair<PlayerId, PlayerId>> cells;
    std::set<std::pair<PlayerId, PlayerId>> dissolved;

    bool trusts(PlayerId i, PlayerId j) const { return cells.count({i, j}) > 0; }
};

// Counts responses whose claimed role ("I am a/the X", "As a/the X")
// contradicts the speaker's actual role, per side.
std::map<Side, int> detect_camouflage(const RoundRecord& record);
// The role claimed in one message, if any.
std::optional<Role> extract_role_claim(const std::string& text);

class TrustClassifier {
public:
    virtual ~TrustClassifier() = default;
    virtual std::string id() const = 0;
    // One table per day; `previous` carries trust established earlier.
    virtual TrustTable classify_day(const RoundRecord& record, int day,
                                    const std::set<std::pair<PlayerId, PlayerId>>& previous) = 0;
};

// Default detector: i trusts j when i names j approvingly and acts in line
// with j's stated position (votes or accuses a target j accused). A bare
// "I agree with Player j" does not count. Trust dissolves when i later votes
// for or accuses j.
class RuleBasedTrustClassifier : public TrustClassifier {
public:
    std::string id() const override { return "rule-based-v1"; }
    TrustTable classify_day(const RoundRecord& record, int day,
                            const std::set<std::pair<PlayerId, PlayerId>>& previous) override;
};

std::vector<TrustTable> record_trust(const RoundRecord& record, TrustClassifier& classifier);

struct MetricsReport {
    int rounds_requested = 0;
    int rounds_valid = 0;
    double validity_ratio = 1.0;
    bool reliable = true;  // flagged false when < 80% of rounds were valid
    int villager_wins = 0;
    int wolf_wins = 0;
    int cutoffs = 0;
    double winning_rate = 0.0;     // villager-side wins / valid rounds
    double average_duration = 0.0; // mean t_max over valid rounds
    double winning_rate_ci[2] = {0.0, 0.0};
    double average_duration_ci[2] = {0.0, 0.0};
    std::map<Side, double> camouflage_avg;
    std::string detector_id;
    std::string config_label;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// Folds completed records into the report; bootstrap CIs are seeded.
MetricsReport aggregate_metrics(const std::vector<RoundRecord>& records, int rounds_requested,
                                std::uint64_t bootstrap_seed, const std::string& detector_id,
                                const std::string& config_label = "");

}  // namespace werewolf

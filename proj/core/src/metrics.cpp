#include "werewolf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "werewolf/rng.hpp"

namespace werewolf {

namespace {

const std::regex kClaimAs{R"(\bas (a|the) (werewolf|villager|seer|guard|witch)\b)",
                          std::regex::icase};
const std::regex kClaimIAm{R"(\bI a?'?m\b[^.?!]*?\b(a|the) (werewolf|villager|seer|guard|witch)\b)",
                           std::regex::icase};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Accusation patterns: who does this text point at as a werewolf?
const std::regex kAccuseIs{
    R"(Player (\d+)[^.?!]*\b(is|might be|may be|could be|seems to be)\b[^.?!]*werewol)",
    std::regex::icase};
const std::regex kAccuseSuspect{R"((suspicious of|suspect) Player (\d+))", std::regex::icase};
const std::regex kAccuseVote{R"(vote (to kill|for|to eliminate) Player (\d+))",
                             std::regex::icase};

std::set<PlayerId> accused_targets(const std::string& text) {
    std::set<PlayerId> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kAccuseIs);
         it != std::sregex_iterator(); ++it)
        out.insert(std::stoi((*it)[1].str()));
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kAccuseSuspect);
         it != std::sregex_iterator(); ++it)
        out.insert(std::stoi((*it)[2].str()));
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kAccuseVote);
         it != std::sregex_iterator(); ++it)
        out.insert(std::stoi((*it)[2].str()));
    return out;
}

// Endorsement: does `text` by player i name player j approvingly?
bool endorses(const std::string& text, PlayerId j) {
    std::string t = lower(text);
    std::string pj = "player " + std::to_string(j);
    static const char* kPhrases[] = {
        "agree with ", "as ",      "based on ",  "thanks to ",
        "trust ",      "believe ", "said by ",   "following ",
    };
    for (const char* phrase : kPhrases) {
        std::string needle = std::string(phrase) + pj;
        if (t.find(needle) != std::string::npos) return true;
    }
    // "player j's observation/claim/analysis/suggestion"
    for (const char* noun : {"observation", "claim", "analysis", "suggestion", "statement"}) {
        if (t.find(pj + "'s " + noun) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

std::optional<Role> extract_role_claim(const std::string& text) {
    std::smatch as_match;
    std::smatch iam_match;
    bool has_as = std::regex_search(text, as_match, kClaimAs);
    bool has_iam = std::regex_search(text, iam_match, kClaimIAm);
    if (!has_as && !has_iam) return std::nullopt;
    const std::smatch* first = nullptr;
    if (has_as && has_iam)
        first = as_match.position(0) <= iam_match.position(0) ? &as_match : &iam_match;
    else
        first = has_as ? &as_match : &iam_match;
    return role_from_name(lower((*first)[2].str()));
}

std::map<Side, int> detect_camouflage(const RoundRecord& record) {
    std::map<Side, int> counts{{Side::Wolf, 0}, {Side::Villager, 0}};
    for (const auto& m : record.transcript) {
        if (m.kind != MessageKind::Response) continue;
        auto claim = extract_role_claim(m.text);
        if (!claim) continue;
        auto it = record.roles.find(m.speaker);
        if (it == record.roles.end()) continue;
        if (*claim != it->second) counts[side_of(it->second)] += 1;
    }
    return counts;
}

TrustTable RuleBasedTrustClassifier::classify_day(
    const RoundRecord& record, int day,
    const std::set<std::pair<PlayerId, PlayerId>>& previous) {
    TrustTable table;
    table.day = day;
    table.players = static_cast<int>(record.roles.size());

    // What each player said and accused during this day phase.
    std::map<PlayerId, std::vector<const Message*>> said;
    std::map<PlayerId, std::set<PlayerId>> accusations;
    for (const auto& m : record.transcript) {
        if (m.kind != MessageKind::Response || m.segment != Segment::Day || m.day != day)
            continue;
        said[m.speaker].push_back(&m);
        auto targets = accused_targets(m.text);
        accusations[m.speaker].insert(targets.begin(), targets.end());
    }
    std::map<PlayerId, std::optional<PlayerId>> votes;
    for (const auto& turn : record.turns) {
        if (turn.day == day && turn.phase == Phase::Day && turn.step == "day_vote")
            votes[turn.player] = turn.target;
    }

    for (const auto& [i, messages] : said) {
        for (const auto& [j, accuses] : accusations) {
            if (i == j) continue;
            bool endorsement = false;
            for (const Message* m : messages)
                if (endorses(m->text, j)) endorsement = true;
            if (!endorsement) continue;
            // Substance: acting in line with j's accusations.
            bool aligned = false;
            auto vote = votes.find(i);
            if (vote != votes.end() && vote->second && accuses.count(*vote->second)) aligned = true;
            for (PlayerId target : accusations[i])
                if (accuses.count(target)) aligned = true;
            if (aligned) table.cells.insert({i, j});
        }
    }

    // Dissolution: previously-trusted j now voted against or accused by i.
    for (const auto& [i, j] : previous) {
        bool against = false;
        auto vote = votes.find(i);
        if (vote != votes.end() && vote->second && *vote->second == j) against = true;
        if (accusations.count(i) && accusations[i].count(j)) against = true;
        if (against && !table.cells.count({i, j})) table.dissolved.insert({i, j});
    }
    return table;
}

std::vector<TrustTable> record_trust(const RoundRecord& record, TrustClassifier& classifier) {
    std::vector<TrustTable> tables;
    std::set<std::pair<PlayerId, PlayerId>> established;
    for (int day = 1; day <= std::max(record.t_max, 1); ++day) {
        TrustTable table = classifier.classify_day(record, day, established);
        for (const auto& cell : table.cells) established.insert(cell);
        for (const auto& cell : table.dissolved) established.erase(cell);
        tables.push_back(std::move(table));
    }
    return tables;
}

namespace {

std::pair<double, double> bootstrap_ci(const std::vector<double>& values, std::uint64_t seed,
                                       int resamples = 1000) {
    if (values.empty()) return {0.0, 0.0};
    SplitMix64 rng(seed);
    std::vector<double> means;
    means.reserve(resamples);
    for (int r = 0; r < resamples; ++r) {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            sum += values[rng.below(values.size())];
        means.push_back(sum / static_cast<double>(values.size()));
    }
    std::sort(means.begin(), means.end());
    auto pick = [&](double q) {
        std::size_t idx = static_cast<std::size_t>(q * (means.size() - 1));
        return means[idx];
    };
    return {pick(0.025), pick(0.975)};
}

}  // namespace

MetricsReport aggregate_metrics(const std::vector<RoundRecord>& records, int rounds_requested,
                                std::uint64_t bootstrap_seed, const std::string& detector_id,
                                const std::string& config_label) {
    MetricsReport report;
    report.rounds_requested = rounds_requested;
    report.detector_id = detector_id;
    report.config_label = config_label;

    std::vector<double> wins;
    std::vector<double> durations;
    double camo_wolf = 0.0;
    double camo_villager = 0.0;
    for (const auto& record : records) {
        if (!record.valid || !record.outcome) continue;
        report.rounds_valid += 1;
        switch (*record.outcome) {
            case Victory::VillagerSide: report.villager_wins += 1; break;
            case Victory::WolfSide: report.wolf_wins += 1; break;
            case Victory::Cutoff: report.cutoffs += 1; break;
        }
        wins.push_back(*record.outcome == Victory::VillagerSide ? 1.0 : 0.0);
        durations.push_back(static_cast<double>(record.t_max));
        auto camo = detect_camouflage(record);
        camo_wolf += camo[Side::Wolf];
        camo_villager += camo[Side::Villager];
    }

    if (report.rounds_valid > 0) {
        report.winning_rate = static_cast<double>(report.villager_wins) / report.rounds_valid;
        report.average_duration =
            std::accumulate(durations.begin(), durations.end(), 0.0) / report.rounds_valid;
        report.camouflage_avg[Side::Wolf] = camo_wolf / report.rounds_valid;
        report.camouflage_avg[Side::Villager] = camo_villager / report.rounds_valid;
        auto wr_ci = bootstrap_ci(wins, bootstrap_seed);
        report.winning_rate_ci[0] = wr_ci.first;
        report.winning_rate_ci[1] = wr_ci.second;
        auto dur_ci = bootstrap_ci(durations, mix_seed(bootstrap_seed, 1));
        report.average_duration_ci[0] = dur_ci.first;
        report.average_duration_ci[1] = dur_ci.second;
    }
    report.validity_ratio = rounds_requested > 0
                                ? static_cast<double>(report.rounds_valid) / rounds_requested
                                : 1.0;
    report.reliable = report.validity_ratio >= 0.8;
    return report;
}

nlohmann::json MetricsReport::to_json() const {
    nlohmann::json j;
    j["config_label"] = config_label;
    j["rounds_requested"] = rounds_requested;
    j["rounds_valid"] = rounds_valid;
    j["validity_ratio"] = validity_ratio;
    j["reliable"] = reliable;
    j["villager_wins"] = villager_wins;
    j["wolf_wins"] = wolf_wins;
    j["cutoffs"] = cutoffs;
    j["winning_rate"] = winning_rate;
    j["winning_rate_ci"] = {winning_rate_ci[0], winning_rate_ci[1]};
    j["average_duration"] = average_duration;
    j["average_duration_ci"] = {average_duration_ci[0], average_duration_ci[1]};
    j["camouflage_avg_villager"] =
        camouflage_avg.count(Side::Villager) ? camouflage_avg.at(Side::Villager) : 0.0;
    j["camouflage_avg_wolf"] =
        camouflage_avg.count(Side::Wolf) ? camouflage_avg.at(Side::Wolf) : 0.0;
    j["detector_id"] = detector_id;
    return j;
}

std::string MetricsReport::to_csv() const {
    std::ostringstream out;
    out << "config_label,rounds_requested,rounds_valid,winning_rate,winning_rate_lo,"
           "winning_rate_hi,average_duration,average_duration_lo,average_duration_hi,"
           "camouflage_avg_villager,camouflage_avg_wolf,reliable\n";
    out << config_label << "," << rounds_requested << "," << rounds_valid << "," << winning_rate
        << "," << winning_rate_ci[0] << "," << winning_rate_ci[1] << "," << average_duration
        << "," << average_duration_ci[0] << "," << average_duration_ci[1] << ","
        << (camouflage_avg.count(Side::Villager) ? camouflage_avg.at(Side::Villager) : 0.0) << ","
        << (camouflage_avg.count(Side::Wolf) ? camouflage_avg.at(Side::Wolf) : 0.0) << ","
        << (reliable ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace werewolf

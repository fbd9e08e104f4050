#include "werewolf/transcript.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "werewolf/cognition.hpp"
#include "werewolf/moderator.hpp"

namespace werewolf {

std::set<PlayerId> RoundRecord::winning_players() const {
    std::set<PlayerId> out;
    if (!outcome || *outcome == Victory::Cutoff) return out;
    for (const auto& [id, role] : roles) {
        Side side = side_of(role);
        if ((*outcome == Victory::WolfSide) == (side == Side::Wolf)) out.insert(id);
    }
    return out;
}

namespace {

nlohmann::json turn_to_json(const TurnInfo& t) {
    nlohmann::json j;
    j["type"] = "turn";
    j["player"] = t.player;
    j["day"] = t.day;
    j["phase"] = phase_name(t.phase);
    j["step"] = t.step;
    if (t.target) j["target"] = *t.target;
    j["reflection"] = t.reflection;
    j["response"] = t.response;
    if (t.suggestion) j["suggestion"] = *t.suggestion;
    return j;
}

TurnInfo turn_from_json(const nlohmann::json& j) {
    TurnInfo t;
    t.player = j.at("player").get<PlayerId>();
    t.day = j.at("day").get<int>();
    t.phase = j.at("phase").get<std::string>() == "night" ? Phase::Night : Phase::Day;
    t.step = j.at("step").get<std::string>();
    if (j.contains("target")) t.target = j.at("target").get<PlayerId>();
    t.reflection = j.at("reflection").get<std::string>();
    t.response = j.at("response").get<std::string>();
    if (j.contains("suggestion")) t.suggestion = j.at("suggestion").get<std::string>();
    return t;
}

std::string ordinal(int n) {
    if (n % 100 >= 11 && n % 100 <= 13) return std::to_string(n) + "-th";
    switch (n % 10) {
        case 1: return std::to_string(n) + "-st";
        case 2: return std::to_string(n) + "-nd";
        case 3: return std::to_string(n) + "-rd";
        default: return std::to_string(n) + "-th";
    }
}

}  // namespace

std::string RoundRecord::to_jsonl() const {
    std::ostringstream out;
    nlohmann::json header;
    header["type"] = "header";
    header["round_id"] = round_id;
    header["config_fingerprint"] = config_fingerprint;
    header["seed"] = seed;
    nlohmann::json game_json;
    game_json["max_days"] = game.max_days;
    game_json["strict_guard_rule"] = game.strict_guard_rule;
    game_json["day_vote_rule"] = day_vote_rule_name(game.day_vote_rule);
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [role, n] : game.role_counts) counts[role_name(role)] = n;
    game_json["role_counts"] = counts;
    header["game"] = game_json;
    nlohmann::json roles_json = nlohmann::json::object();
    for (const auto& [id, role] : roles) roles_json[std::to_string(id)] = role_name(role);
    header["roles"] = roles_json;
    header["talk_order"] = talk_order;
    header["outcome"] = outcome ? victory_name(*outcome) : "aborted";
    header["t_max"] = t_max;
    header["valid"] = valid;
    out << header.dump() << "\n";
    for (const auto& m : transcript) out << m.to_json().dump() << "\n";
    for (const auto& t : turns) out << turn_to_json(t).dump() << "\n";
    return out.str();
}

void RoundRecord::save_jsonl(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write round record: " + path);
    out << to_jsonl();
}

RoundRecord RoundRecord::parse_jsonl(const std::string& content) {
    RoundRecord record;
    std::istringstream in(content);
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        std::string type = j.is_object() && j.contains("type") ? j["type"].get<std::string>() : "";
        if (type == "header") {
            saw_header = true;
            record.round_id = j.at("round_id").get<int>();
            record.config_fingerprint = j.at("config_fingerprint").get<std::string>();
            record.seed = j.at("seed").get<std::uint64_t>();
            const auto& game_json = j.at("game");
            record.game.max_days = game_json.at("max_days").get<int>();
            record.game.strict_guard_rule = game_json.at("strict_guard_rule").get<bool>();
            auto rule = day_vote_rule_from_name(game_json.at("day_vote_rule").get<std::string>());
            if (!rule) throw IoError("bad day_vote_rule in round header");
            record.game.day_vote_rule = *rule;
            record.game.role_counts.clear();
            for (const auto& [key, value] : game_json.at("role_counts").items()) {
                auto role = role_from_name(key);
                if (!role) throw IoError("bad role in round header role_counts");
                record.game.role_counts[*role] = value.get<int>();
            }
            record.game.rng_seed = record.seed;
            for (const auto& [key, value] : j.at("roles").items()) {
                auto role = role_from_name(value.get<std::string>());
                if (!role) throw IoError("bad role in round header");
                record.roles[std::stoi(key)] = *role;
            }
            record.talk_order = j.at("talk_order").get<std::vector<PlayerId>>();
            std::string outcome = j.at("outcome").get<std::string>();
            if (outcome == "villager_side") record.outcome = Victory::VillagerSide;
            else if (outcome == "wolf_side") record.outcome = Victory::WolfSide;
            else if (outcome == "cutoff") record.outcome = Victory::Cutoff;
            record.t_max = j.at("t_max").get<int>();
            record.valid = j.at("valid").get<bool>();
        } else if (type == "turn") {
            record.turns.push_back(turn_from_json(j));
        } else {
            record.transcript.push_back(Message::from_json(j));
        }
    }
    if (!saw_header) throw IoError("round record has no header line");
    return record;
}

RoundRecord RoundRecord::load_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open round record: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_jsonl(ss.str());
}

std::string RoundRecord::to_pretty() const {
    std::string out;
    std::optional<std::pair<Segment, int>> banner;
    for (const auto& m : transcript) {
        std::pair<Segment, int> here{m.segment, m.segment == Segment::Init ? 0 : m.day};
        if (!banner || *banner != here) {
            banner = here;
            switch (m.segment) {
                case Segment::Init: out += "== Initialization ==\n"; break;
                case Segment::Night:
                    out += "== The " + ordinal(m.day) + " night ==\n";
                    break;
                case Segment::Day:
                    out += "== The " + ordinal(m.day) + " daytime ==\n";
                    break;
            }
        }
        if (m.kind == MessageKind::Reflection) continue;  // private scratch text
        out += m.pretty_line();
        out += "\n";
    }
    return out;
}

void verify_record(const RoundRecord& record) {
    GameConfig config = record.game;
    config.rng_seed = record.seed;
    Moderator moderator(config, record.round_id);

    // The recorded assignment must match what the seed regenerates.
    for (const auto& [id, role] : record.roles) {
        if (moderator.state().role_of(id) != role)
            throw FixtureError("stored roles do not match the seeded assignment");
    }
    if (moderator.state().talk_order != record.talk_order)
        throw FixtureError("stored talk order does not match the seeded permutation");

    // Feed the recorded responses back through the engine.
    std::map<std::tuple<int, Phase, PlayerId>, std::vector<const Message*>> responses;
    std::map<std::tuple<int, Phase, PlayerId>, std::size_t> cursor;
    for (const auto& m : record.transcript) {
        if (m.kind == MessageKind::Response)
            responses[{m.day, m.phase(), m.speaker}].push_back(&m);
    }
    while (!moderator.finished()) {
        const auto& instr = moderator.current();
        if (!moderator.awaiting_response()) {
            moderator.advance();
            continue;
        }
        auto key = std::make_tuple(instr.day, instr.segment == Segment::Day ? Phase::Day : Phase::Night,
                                   *instr.actor);
        auto it = responses.find(key);
        std::size_t& pos = cursor[key];
        if (it == responses.end() || pos >= it->second.size())
            throw FixtureError("transcript is missing a response for " +
                               player_name(*instr.actor));
        const Message* m = it->second[pos++];
        auto parsed = parse_agent_reply(m->text, instr.expected, instr.legal_targets,
                                        instr.pass_allowed, *instr.actor);
        moderator.submit(parsed.action);
    }

    if (!record.outcome || *moderator.result() != *record.outcome)
        throw FixtureError("stored outcome does not match the replayed outcome");
    if (moderator.t_max() != record.t_max)
        throw FixtureError("stored t_max does not match the replayed duration");
}

}  // namespace werewolf

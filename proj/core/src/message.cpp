#include "werewolf/message.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace werewolf {

std::string message_kind_name(MessageKind k) {
    switch (k) {
        case MessageKind::Observation: return "observation";
        case MessageKind::Response: return "response";
        case MessageKind::Reflection: return "reflection";
        case MessageKind::System: return "system";
    }
    throw InvariantError("unknown message kind");
}

std::optional<MessageKind> message_kind_from_name(const std::string& name) {
    for (MessageKind k : {MessageKind::Observation, MessageKind::Response,
                          MessageKind::Reflection, MessageKind::System}) {
        if (message_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

bool Message::heard_by(PlayerId id) const {
    if (audience.empty()) return true;
    return std::find(audience.begin(), audience.end(), id) != audience.end();
}

nlohmann::json Message::to_json() const {
    nlohmann::json j;
    j["seq"] = seq;
    j["round"] = round;
    j["day"] = day;
    j["phase"] = segment_name(segment);
    j["kind"] = message_kind_name(kind);
    j["speaker"] = speaker;
    if (audience.empty()) {
        j["audience"] = "all";
    } else {
        j["audience"] = audience;
    }
    j["text"] = text;
    j["score"] = info_score;
    return j;
}

Message Message::from_json(const nlohmann::json& j) {
    Message m;
    m.seq = j.at("seq").get<long>();
    m.round = j.at("round").get<int>();
    m.day = j.at("day").get<int>();
    auto seg = segment_from_name(j.at("phase").get<std::string>());
    if (!seg) throw IoError("bad phase in message record");
    m.segment = *seg;
    auto kind = message_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) throw IoError("bad kind in message record");
    m.kind = *kind;
    m.speaker = j.at("speaker").get<PlayerId>();
    const auto& aud = j.at("audience");
    if (aud.is_string()) {
        if (aud.get<std::string>() != "all") throw IoError("bad audience in message record");
    } else {
        m.audience = aud.get<std::vector<PlayerId>>();
    }
    m.text = j.at("text").get<std::string>();
    m.info_score = j.value("score", 0);
    return m;
}

std::string Message::pretty_line() const {
    std::string who = player_name(speaker);
    if (speaker != kModerator) return who + ": " + text;
    std::string to;
    if (audience.empty()) {
        to = "all";
    } else if (segment == Segment::Night) {
        // Confidential night traffic renders the audience as a list.
        to = "[";
        for (std::size_t i = 0; i < audience.size(); ++i) {
            if (i) to += ", ";
            to += "'" + player_name(audience[i]) + "'";
        }
        to += "]";
    } else {
        for (std::size_t i = 0; i < audience.size(); ++i) {
            if (i) to += ", ";
            to += player_name(audience[i]);
        }
    }
    return who + " (-> " + to + "): " + text;
}

}  // namespace werewolf

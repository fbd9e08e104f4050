#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "werewolf/types.hpp"

namespace werewolf {

enum class MessageKind { Observation, Response, Reflection, System };
std::string message_kind_name(MessageKind k);
std::optional<MessageKind> message_kind_from_name(const std::string& name);

// One transcript entry. Every utterance an agent says (Response), hears from
// the moderator (System) or summarizes for itself (Reflection) is a Message;
// a Response doubles as an Observation for everyone else in its audience.
struct Message {
    long seq = 0;
    int round = 0;
    int day = 1;
    Segment segment = Segment::Init;
    MessageKind kind = MessageKind::System;
    PlayerId speaker = kModerator;
    // Empty = everyone. Night traffic is confidential to the listed players.
    std::vector<PlayerId> audience;
    std::string text;
    int info_score = 1;  // assigned exactly once, at append time

    Phase phase() const { return segment == Segment::Day ? Phase::Day : Phase::Night; }
    bool broadcast() const { return audience.empty(); }
    bool heard_by(PlayerId id) const;

    nlohmann::json to_json() const;
    static Message from_json(const nlohmann::json& j);

    // "Moderator (-> all): text" / "Player 3: text" rendering.
    std::string pretty_line() const;

    bool operator==(const Message&) const = default;
};

}  // namespace werewolf

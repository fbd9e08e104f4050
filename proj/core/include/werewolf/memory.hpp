#pragma once

#include <vector>

#include "werewolf/message.hpp"

namespace werewolf {

// Rule-matched message priority, 5 (own role disclosure) down to 1 (chatter).
// First matching rule wins, checked in descending score order:
//   5  the agent receives its role
//   4  a death or elimination announcement
//   3  a role is uncovered, claimed or speculated about
//   2  potion usage is disclosed
//   1  everything else
// Total and deterministic over the message text alone.
int score_informativeness(const Message& m);

// True when `owner` keeps this message: everything audible to the owner that
// it did not say itself, plus its own reflections.
bool retained_by_owner(const Message& m, PlayerId owner);

// Per-agent message store feeding the context pipeline. Append-only and
// strictly chronological; appending never reorders existing entries.
class ShortTermMemory {
public:
    explicit ShortTermMemory(PlayerId owner) : owner_(owner) {}

    PlayerId owner() const { return owner_; }
    // Returns true when the message was visible and stored.
    bool append(const Message& m);
    const std::vector<Message>& entries() const { return entries_; }

private:
    PlayerId owner_;
    std::vector<Message> entries_;
};

// Last min(K, size) entries in chronological order.
std::vector<Message> recent_window(const ShortTermMemory& memory, int k);

// N highest-scoring entries, ties broken toward newer messages, returned in
// chronological order. May overlap with recent_window; no deduplication.
std::vector<Message> top_informative(const ShortTermMemory& memory, int n);

}  // namespace werewolf

#include "werewolf/memory.hpp"

#include <algorithm>
#include <numeric>
#include <regex>

namespace werewolf {

namespace {

const std::regex kRoleAssignment{R"(^You are (werewolf|villager|seer|guard|witch)!$)"};
// "Player 2 is a werewolf!", "Player 1, Player 2 are all of the 2 werewolves!"
const std::regex kWerewolfDisclosure{R"(Player\s+\d+[^.?!]*\b(is|are)\b[^.?!]*werewol)",
                                     std::regex::icase};
// "I am the witch", "As a villager, ...", "I am Player 2, the witch."
const std::regex kRoleClaim{
    R"((\bI am\b|\bAs (a|the)\b)[^.?!]*\b(werewolf|villager|seer|guard|witch)\b)",
    std::regex::icase};
const std::regex kRoleNoun{R"(\b(werewolf|werewolves|villagers?|seers?|guards?|witch(es)?)\b)",
                           std::regex::icase};
const std::regex kPlayerMention{R"(Player\s+(\d+))"};
const std::regex kDrugMention{R"(\b(antidote|poison(ed)?|drugs?)\b)", std::regex::icase};

bool mentions_other_player(const std::string& text, PlayerId speaker) {
    auto begin = std::sregex_iterator(text.begin(), text.end(), kPlayerMention);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        if (std::stoi((*it)[1].str()) != speaker) return true;
    }
    return false;
}

}  // namespace

int score_informativeness(const Message& m) {
    const std::string& t = m.text;
    if (std::regex_search(t, kRoleAssignment)) return 5;
    if (t.find("died last night!") != std::string::npos ||
        t.find("will be killed!") != std::string::npos)
        return 4;
    if (std::regex_search(t, kWerewolfDisclosure)) return 3;
    if (m.speaker != kModerator) {
        if (std::regex_search(t, kRoleClaim)) return 3;
        // Free-text speculation counts only when a role noun co-occurs with
        // another player's name.
        if (std::regex_search(t, kRoleNoun) && mentions_other_player(t, m.speaker)) return 3;
    }
    if (std::regex_search(t, kDrugMention)) return 2;
    return 1;
}

bool retained_by_owner(const Message& m, PlayerId owner) {
    if (m.speaker == owner) return m.kind == MessageKind::Reflection;
    return m.heard_by(owner);
}

bool ShortTermMemory::append(const Message& m) {
    if (!retained_by_owner(m, owner_)) return false;
    entries_.push_back(m);
    return true;
}

std::vector<Message> recent_window(const ShortTermMemory& memory, int k) {
    const auto& all = memory.entries();
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), all.size());
    return {all.end() - static_cast<long>(n), all.end()};
}

std::vector<Message> top_informative(const ShortTermMemory& memory, int n) {
    const auto& all = memory.entries();
    std::vector<std::size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (all[a].info_score != all[b].info_score) return all[a].info_score > all[b].info_score;
        return all[a].seq > all[b].seq;  // ties go to the newer message
    });
    idx.resize(std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), idx.size()));
    std::sort(idx.begin(), idx.end());  // back to chronological order
    std::vector<Message> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(all[i]);
    return out;
}

}  // namespace werewolf

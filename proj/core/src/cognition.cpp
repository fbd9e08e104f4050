#include "werewolf/cognition.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace werewolf {

std::string prompt_part_name(PromptPart p) {
    switch (p) {
        case PromptPart::Z: return "Z";
        case PromptPart::O: return "O";
        case PromptPart::V: return "V";
        case PromptPart::Q: return "Q";
        case PromptPart::R: return "R";
        case PromptPart::S: return "S";
        case PromptPart::C: return "C";
    }
    throw InvariantError("unknown prompt part");
}

std::optional<PromptPart> prompt_part_from_name(const std::string& name) {
    for (PromptPart p : {PromptPart::Z, PromptPart::O, PromptPart::V, PromptPart::Q,
                         PromptPart::R, PromptPart::S, PromptPart::C}) {
        if (prompt_part_name(p) == name) return p;
    }
    return std::nullopt;
}

std::string ablation_to_string(const AblationMask& mask) {
    std::string out;
    for (PromptPart p : mask) {
        if (!out.empty()) out += ",";
        out += prompt_part_name(p);
    }
    return out;
}

AblationMask ablation_from_string(const std::string& csv) {
    AblationMask mask;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) {
        // trim
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
            token.erase(token.begin());
        while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
            token.pop_back();
        if (token.empty()) continue;
        auto p = prompt_part_from_name(token);
        if (!p) throw ConfigError("unknown prompt part in ablation mask: " + token);
        mask.insert(*p);
    }
    return mask;
}

namespace {

std::string render_block(const std::vector<Message>& messages) {
    std::string out;
    for (const auto& m : messages) {
        out += m.pretty_line();
        out += "\n";
    }
    return out;
}

std::string normalize_for_match(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool last_space = true;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            out += static_cast<char>(std::tolower(u));
            last_space = false;
        } else if (!last_space) {
            out += ' ';
            last_space = true;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> split_hash_list(const std::string& reply) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream in(reply);
    while (std::getline(in, token, '#')) {
        auto begin = token.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) continue;
        auto end = token.find_last_not_of(" \t\r\n");
        out.push_back(token.substr(begin, end - begin + 1));
    }
    return out;
}

std::string join_hash(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += "#";
        out += items[i];
    }
    return out;
}

std::string numbered_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(i + 1) + ". " + items[i];
    }
    return out;
}

}  // namespace

std::string render_context(const std::string& rules, const std::vector<Message>& recent,
                           const PromptTemplates& templates) {
    std::string out = rules;
    out += "\n\n";
    out += templates.raw("recent_header");
    out += "\n";
    out += render_block(recent);
    return out;
}

std::string assemble_prompt(const PromptBundle& bundle, const PromptTemplates& templates) {
    const auto& mask = bundle.ablation;
    bool has = true;
    std::string out;
    auto enabled = [&](PromptPart p) { return mask.find(p) == mask.end(); };

    if (enabled(PromptPart::Z)) {
        out += bundle.rules;
        has = !bundle.rules.empty();
    }
    if (enabled(PromptPart::O)) {
        if (has) out += "\n\n";
        out += templates.raw("recent_header");
        out += "\n";
        out += render_block(bundle.recent);
        has = true;
    }
    if (enabled(PromptPart::V)) {
        if (has) out += "\n\n";
        out += templates.raw("informative_header");
        out += "\n";
        out += render_block(bundle.informative);
        has = true;
    }

    if (has) out += "\n\n";
    std::map<std::string, std::string> values = {
        {"t", std::to_string(bundle.day)},
        {"day_or_night", PromptTemplates::day_or_night(bundle.phase)},
        {"reflection", bundle.reflection},
        {"suggestion", bundle.suggestion.value_or("")},
    };
    out += templates.render("final_head", values);
    if (enabled(PromptPart::R)) out += templates.render("final_reflection", values);
    out += ".";
    if (enabled(PromptPart::S) && bundle.suggestion)
        out += templates.render("final_suggestion", values);
    if (enabled(PromptPart::C)) out += templates.render("final_cot", values);
    return out;
}

std::vector<std::string> select_questions(const QuestionBank& bank, const TurnContext& ctx,
                                          const std::string& context_prefix, int num_select,
                                          ChatProvider& chat, const PromptTemplates& templates) {
    auto candidates = bank.candidates(ctx.role);
    auto pad = [&](std::vector<std::string> chosen) {
        for (const auto& q : candidates) {
            if (static_cast<int>(chosen.size()) >= num_select) break;
            if (std::find(chosen.begin(), chosen.end(), q) == chosen.end()) chosen.push_back(q);
        }
        if (static_cast<int>(chosen.size()) > num_select) chosen.resize(num_select);
        return chosen;
    };

    std::string prompt = context_prefix + "\n\n" +
                         templates.render("select_questions",
                                          {{"t", std::to_string(ctx.day)},
                                           {"day_or_night", PromptTemplates::day_or_night(ctx.phase)},
                                           {"i", std::to_string(ctx.me)},
                                           {"role", role_name(ctx.role)},
                                           {"questions", numbered_list(candidates)}});
    ChatRequest request;
    request.messages = {{"user", prompt}};
    request.tag = CallTag::Auxiliary;
    request.key = ctx.key("select_questions");

    std::string reply;
    try {
        reply = chat.chat(request);
    } catch (const ProviderError&) {
        return pad({});
    }

    std::vector<std::string> chosen;
    for (const auto& entry : split_hash_list(reply)) {
        std::string norm = normalize_for_match(entry);
        if (norm.empty()) continue;
        for (const auto& q : candidates) {
            std::string qn = normalize_for_match(q);
            if (qn.find(norm) == std::string::npos && norm.find(qn) == std::string::npos)
                continue;
            if (std::find(chosen.begin(), chosen.end(), q) == chosen.end()) chosen.push_back(q);
            break;
        }
        if (static_cast<int>(chosen.size()) >= num_select) break;
    }
    return pad(std::move(chosen));
}

std::vector<std::string> ask_questions(const TurnContext& ctx, const std::string& context_prefix,
                                       const std::vector<std::string>& selected, int num_ask,
                                       ChatProvider& chat, const PromptTemplates& templates) {
    std::string prompt = context_prefix + "\n\n" +
                         templates.render("ask_questions",
                                          {{"t", std::to_string(ctx.day)},
                                           {"day_or_night", PromptTemplates::day_or_night(ctx.phase)},
                                           {"i", std::to_string(ctx.me)},
                                           {"role", role_name(ctx.role)},
                                           {"selected_questions", join_hash(selected)}});
    ChatRequest request;
    request.messages = {{"user", prompt}};
    request.tag = CallTag::Auxiliary;
    request.key = ctx.key("ask_questions");

    std::string reply;
    try {
        reply = chat.chat(request);
    } catch (const ProviderError&) {
        return {};
    }
    auto questions = split_hash_list(reply);
    if (static_cast<int>(questions.size()) > num_ask) questions.resize(num_ask);
    return questions;
}

std::vector<Message> retrieve_evidence(const std::string& question, const ShortTermMemory& memory,
                                       int top_t, EmbeddingProvider& embed,
                                       const EmbeddingSpace& qa_space) {
    const auto& entries = memory.entries();
    if (entries.empty()) return {};
    try {
        auto query = embed.embed(qa_space, question);
        std::vector<std::pair<double, std::size_t>> scored;
        scored.reserve(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            auto v = embed.embed(qa_space, entries[i].text);
            scored.emplace_back(dot(query, v), i);
        }
        std::stable_sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return entries[a.second].seq > entries[b.second].seq;  // ties: newer first
        });
        std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(top_t, 0)),
                                                 scored.size());
        std::vector<std::size_t> idx;
        idx.reserve(keep);
        for (std::size_t i = 0; i < keep; ++i) idx.push_back(scored[i].second);
        std::sort(idx.begin(), idx.end());
        std::vector<Message> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) out.push_back(entries[i]);
        return out;
    } catch (const ProviderError&) {
        return recent_window(memory, top_t);
    }
}

std::string truncate_sentences(const std::string& text, int max_sentences) {
    int seen = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // A period inside a number ("1.5") is not a sentence end.
        bool end_of_text = i + 1 >= text.size();
        if (!end_of_text && !std::isspace(static_cast<unsigned char>(text[i + 1]))) continue;
        if (++seen == max_sentences && !end_of_text) return text.substr(0, i + 1);
    }
    return text;
}

std::string answer_question(const TurnContext& ctx, const std::string& context_prefix,
                            const std::string& question, const std::vector<Message>& evidence,
                            ChatProvider& chat, const PromptTemplates& templates, int index) {
    std::vector<std::string> texts;
    texts.reserve(evidence.size());
    for (const auto& m : evidence) texts.push_back(m.text);

    std::string prompt = context_prefix + "\n\n" +
                         templates.render("answer",
                                          {{"t", std::to_string(ctx.day)},
                                           {"day_or_night", PromptTemplates::day_or_night(ctx.phase)},
                                           {"i", std::to_string(ctx.me)},
                                           {"role", role_name(ctx.role)},
                                           {"question", question},
                                           {"T", std::to_string(texts.size())},
                                           {"candidate_answers", numbered_list(texts)}});
    ChatRequest request;
    request.messages = {{"user", prompt}};
    request.tag = CallTag::Auxiliary;
    request.key = ctx.key(index < 0 ? "answer" : "answer:" + std::to_string(index));

    try {
        std::string reply = chat.chat(request);
        if (reply.empty()) return kNoAnswerSentinel;
        return truncate_sentences(reply, 2);
    } catch (const ProviderError&) {
        return kNoAnswerSentinel;
    }
}

std::string reflect(const TurnContext& ctx, const std::vector<Message>& recent,
                    const std::vector<Message>& informative,
                    const std::vector<std::pair<std::string, std::string>>& answers,
                    ChatProvider& chat, const PromptTemplates& templates) {
    std::string degraded;
    for (const auto& [q, a] : answers) {
        if (!degraded.empty()) degraded += " ";
        degraded += a;
    }

    std::string rendered_answers;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (i) rendered_answers += " ";
        rendered_answers +=
            std::to_string(i + 1) + ". Q: " + answers[i].first + " A: " + answers[i].second;
    }

    std::string prompt;
    prompt += templates.raw("recent_header");
    prompt += "\n";
    prompt += render_block(recent);
    prompt += "\n";
    prompt += templates.raw("informative_header");
    prompt += "\n";
    prompt += render_block(informative);
    prompt += "\n";
    prompt += templates.render("reflect",
                               {{"t", std::to_string(ctx.day)},
                                {"day_or_night", PromptTemplates::day_or_night(ctx.phase)},
                                {"i", std::to_string(ctx.me)},
                                {"role", role_name(ctx.role)},
                                {"answers", rendered_answers}});
    ChatRequest request;
    request.messages = {{"user", prompt}};
    request.tag = CallTag::Auxiliary;
    request.key = ctx.key("reflect");

    try {
        std::string reply = chat.chat(request);
        return reply.empty() ? degraded : reply;
    } catch (const ProviderError&) {
        return degraded;
    }
}

namespace {

bool word_at(const std::string& lower, std::size_t pos, const std::string& word) {
    if (lower.compare(pos, word.size(), word) != 0) return false;
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
    };
    if (pos > 0 && is_word(lower[pos - 1])) return false;
    std::size_t end = pos + word.size();
    if (end < lower.size() && is_word(lower[end])) return false;
    return true;
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

ParsedReply parse_agent_reply(const std::string& raw, ActionKind expected,
                              const std::vector<PlayerId>& legal_targets, bool pass_allowed,
                              PlayerId self) {
    if (raw.empty()) throw UnparseableReplyError("empty reply");

    std::string text = raw;
    auto trim = [](std::string& s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        std::size_t i = 0;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        s.erase(0, i);
    };
    trim(text);
    if (text.size() >= 5 && text.compare(text.size() - 5, 5, "<EOS>") == 0) {
        text.resize(text.size() - 5);
        trim(text);
    }

    static const std::string kMarker = "My concise talking content:";
    std::string talk = text;
    if (auto pos = text.rfind(kMarker); pos != std::string::npos) {
        talk = text.substr(pos + kMarker.size());
        trim(talk);
        // Strip a leading list bullet.
        while (!talk.empty() && (talk.front() == '-' || talk.front() == '*' ||
                                 talk.front() == ':' || talk.front() == '\xc2')) {
            if (talk.front() == '\xc2') {  // UTF-8 middle dot lead byte
                talk.erase(0, 2);
            } else {
                talk.erase(talk.begin());
            }
            trim(talk);
        }
    }

    ParsedReply out;
    out.talk = talk;

    if (expected == ActionKind::Talk || expected == ActionKind::LastWords) {
        out.action = Action::talk(expected, talk);
        return out;
    }

    std::string lower = to_lower(talk);

    if (expected == ActionKind::Antidote) {
        static const std::vector<std::string> kYes = {"yes", "save"};
        static const std::vector<std::string> kNo = {"no", "not", "pass", "won't", "dont",
                                                     "don't"};
        for (std::size_t i = 0; i < lower.size(); ++i) {
            for (const auto& w : kYes)
                if (word_at(lower, i, w)) {
                    out.action = Action::antidote(true);
                    return out;
                }
            for (const auto& w : kNo)
                if (word_at(lower, i, w)) {
                    out.action = Action::antidote(false);
                    return out;
                }
        }
        throw UnparseableReplyError("no yes/no found in reply");
    }

    // Target actions: the first legal mention wins. "myself"/"me" resolve to
    // the speaking player.
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (pass_allowed && word_at(lower, i, "pass")) {
            out.action = Action::pass(expected);
            return out;
        }
        if (word_at(lower, i, "player")) {
            std::size_t j = i + 6;
            while (j < lower.size() && std::isspace(static_cast<unsigned char>(lower[j]))) ++j;
            std::size_t start = j;
            while (j < lower.size() && std::isdigit(static_cast<unsigned char>(lower[j]))) ++j;
            if (j > start) {
                PlayerId id = std::stoi(lower.substr(start, j - start));
                if (std::find(legal_targets.begin(), legal_targets.end(), id) !=
                    legal_targets.end()) {
                    out.action = Action::with_target(expected, id);
                    return out;
                }
            }
        }
        if (word_at(lower, i, "myself") || word_at(lower, i, "me")) {
            if (std::find(legal_targets.begin(), legal_targets.end(), self) !=
                legal_targets.end()) {
                out.action = Action::with_target(expected, self);
                return out;
            }
        }
    }
    throw UnparseableReplyError("no legal action found in reply");
}

}  // namespace werewolf

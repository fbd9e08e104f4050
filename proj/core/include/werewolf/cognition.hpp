#pragma once

#include <set>

#include "werewolf/memory.hpp"
#include "werewolf/prompt_templates.hpp"
#include "werewolf/providers.hpp"
#include "werewolf/question_bank.hpp"

namespace werewolf {

// The components of the response-generation prompt. Z is mandatory in
// runnable configurations; the others can be ablated.
enum class PromptPart { Z, O, V, Q, R, S, C };
using AblationMask = std::set<PromptPart>;
std::string prompt_part_name(PromptPart p);
std::optional<PromptPart> prompt_part_from_name(const std::string& name);
std::string ablation_to_string(const AblationMask& mask);
AblationMask ablation_from_string(const std::string& csv);  // throws ConfigError

// Which agent is thinking, where in the round we are, and how to key the
// provider calls it makes.
struct TurnContext {
    int round = 0;
    int day = 1;
    Phase phase = Phase::Night;
    PlayerId me = 1;
    Role role = Role::Villager;
    int player_count = 7;

    TurnKey key(std::string step) const {
        return TurnKey{round, day, phase, me, std::move(step)};
    }
};

// The four-part prompt before rendering.
struct PromptBundle {
    std::string rules;                      // part 1
    std::vector<Message> recent;            // part 2.1
    std::vector<Message> informative;       // part 2.2
    std::string reflection;                 // part 2.3
    std::optional<std::string> suggestion;  // part 3
    int day = 1;
    Phase phase = Phase::Night;
    AblationMask ablation;
};

// Byte-deterministic rendering in part order 1, 2.1, 2.2, 2.3, 3, 4. A part
// under ablation (or an absent suggestion) leaves no placeholder residue.
std::string assemble_prompt(const PromptBundle& bundle, const PromptTemplates& templates);

// Shared prefix (rules + recent conversation) for the auxiliary calls.
std::string render_context(const std::string& rules, const std::vector<Message>& recent,
                           const PromptTemplates& templates);

// Asks the model to pick L questions from the role's candidates. Replies are
// '#'-split and fuzzy-matched back to the bank (normalized containment);
// unmatched entries are dropped and shortfalls padded in bank order. Provider
// failure falls back to the first L bank questions.
std::vector<std::string> select_questions(const QuestionBank& bank, const TurnContext& ctx,
                                          const std::string& context_prefix, int num_select,
                                          ChatProvider& chat, const PromptTemplates& templates);

// Free-form extra questions, truncated to M; empty on failure.
std::vector<std::string> ask_questions(const TurnContext& ctx, const std::string& context_prefix,
                                       const std::vector<std::string>& selected, int num_ask,
                                       ChatProvider& chat, const PromptTemplates& templates);

// Top-T memory entries by cosine similarity in the qa space, ties to the
// newer message, returned chronologically. Falls back to the recent window
// when embedding fails.
std::vector<Message> retrieve_evidence(const std::string& question, const ShortTermMemory& memory,
                                       int top_t, EmbeddingProvider& embed,
                                       const EmbeddingSpace& qa_space);

inline constexpr const char* kNoAnswerSentinel = "No answer.";

// Answers one question from retrieved evidence; at most two sentences.
// Provider failure yields the "No answer." sentinel so |A| stays L+M.
// `index` distinguishes the call in keys/logs ("answer:0", "answer:1", ...).
std::string answer_question(const TurnContext& ctx, const std::string& context_prefix,
                            const std::string& question, const std::vector<Message>& evidence,
                            ChatProvider& chat, const PromptTemplates& templates, int index = -1);

// Summarizes O, V and the answers into the agent's reflection. On provider
// failure degrades to the concatenation of the answers.
std::string reflect(const TurnContext& ctx, const std::vector<Message>& recent,
                    const std::vector<Message>& informative,
                    const std::vector<std::pair<std::string, std::string>>& answers,
                    ChatProvider& chat, const PromptTemplates& templates);

struct ParsedReply {
    Action action;
    std::string talk;  // the concise talking content (or the whole reply)
};

// Strips "<EOS>", pulls the text after "My concise talking content:" when
// present, and resolves the action from the first legal mention. Throws
// UnparseableReplyError when no legal action can be found.
ParsedReply parse_agent_reply(const std::string& raw, ActionKind expected,
                              const std::vector<PlayerId>& legal_targets, bool pass_allowed,
                              PlayerId self);

// Keeps at most `max_sentences` sentences of `text`.
std::string truncate_sentences(const std::string& text, int max_sentences);

}  // namespace werewolf

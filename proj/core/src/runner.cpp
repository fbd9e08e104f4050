#include "werewolf/runner.hpp"

#include <algorithm>

namespace werewolf {

RoundRunner::RoundRunner(Providers providers, QuestionBank bank, PromptTemplates templates,
                         RunnerOptions options)
    : providers_(std::move(providers)),
      bank_(std::move(bank)),
      templates_(std::move(templates)),
      options_(std::move(options)) {}

Action RoundRunner::default_action(const ModeratorInstruction& instr) {
    switch (instr.expected) {
        case ActionKind::Antidote: return Action::antidote(false);
        case ActionKind::Talk:
        case ActionKind::LastWords:
            return Action::talk(instr.expected, "I have nothing to say.");
        default: return Action::pass(instr.expected);
    }
}

std::string RoundRunner::default_text(const Action& action) {
    switch (action.kind) {
        case ActionKind::Antidote: return action.yes ? "Yes." : "No.";
        case ActionKind::Talk:
        case ActionKind::LastWords: return action.text;
        default:
            if (action.target) return "I choose " + player_name(*action.target) + ".";
            return "I choose to pass.";
    }
}

RoundRunner::TurnOutput RoundRunner::direct_turn(const ModeratorInstruction& instr,
                                                 int round_id) const {
    TurnOutput out;
    Phase phase = instr.segment == Segment::Day ? Phase::Day : Phase::Night;
    ChatRequest request;
    request.messages = {{"user", instr.text}};
    request.tag = CallTag::CoT;
    request.key = TurnKey{round_id, instr.day, phase, *instr.actor, "response"};
    request.options = instr.options;

    std::string raw;
    try {
        raw = providers_.chat->chat(request);
    } catch (const ProviderError&) {
        out.action = default_action(instr);
        out.talk = default_text(out.action);
        return out;
    }
    try {
        auto parsed = parse_agent_reply(raw, instr.expected, instr.legal_targets,
                                        instr.pass_allowed, *instr.actor);
        out.action = parsed.action;
        out.talk = parsed.talk;
    } catch (const UnparseableReplyError&) {
        out.action = default_action(instr);
        out.talk = default_text(out.action);
    }
    return out;
}

RoundRunner::TurnOutput RoundRunner::run_turn(const Moderator& moderator,
                                              const ModeratorInstruction& instr,
                                              const ShortTermMemory& memory,
                                              const ExperiencePool* pool, int round_id) const {
    const PipelineParams& p = options_.pipeline;
    const auto& mask = options_.ablation;
    auto enabled = [&](PromptPart part) { return mask.find(part) == mask.end(); };

    PlayerId me = *instr.actor;
    Role role = moderator.state().role_of(me);
    Phase phase = instr.segment == Segment::Day ? Phase::Day : Phase::Night;
    TurnContext ctx{round_id, instr.day, phase, me, role,
                    static_cast<int>(moderator.state().players.size())};

    TurnOutput out;

    std::string rules = templates_.rules_for(me, role, ctx.player_count);
    auto recent = recent_window(memory, p.recent_window);
    auto informative = top_informative(memory, p.informative_top);
    std::string context_prefix = render_context(rules, recent, templates_);

    // Completeness: select + ask questions, answer each from retrieved
    // evidence. Skipped entirely when Q is ablated.
    std::vector<std::pair<std::string, std::string>> answers;
    if (enabled(PromptPart::Q)) {
        auto questions = select_questions(bank_, ctx, context_prefix, p.select_count,
                                          *providers_.chat, templates_);
        auto extra = ask_questions(ctx, context_prefix, questions, p.ask_count,
                                   *providers_.chat, templates_);
        questions.insert(questions.end(), extra.begin(), extra.end());
        for (std::size_t i = 0; i < questions.size(); ++i) {
            auto evidence = retrieve_evidence(questions[i], memory, p.evidence_top,
                                              *providers_.embed, providers_.qa_space);
            answers.emplace_back(questions[i],
                                 answer_question(ctx, context_prefix, questions[i], evidence,
                                                 *providers_.chat, templates_,
                                                 static_cast<int>(i)));
        }
    }

    if (enabled(PromptPart::R)) {
        out.reflection =
            reflect(ctx, recent, informative, answers, *providers_.chat, templates_);
    }

    // Experience: retrieval keys on the reflection, so it needs R, the
    // suggestion part enabled, a granted role and a non-empty pool.
    if (enabled(PromptPart::S) && options_.use_suggestions && pool && !pool->empty() &&
        options_.experience_sides.count(role) > 0 && enabled(PromptPart::R)) {
        auto subset = retrieve_similar(*pool, out.reflection, p.similarity_threshold,
                                       p.retrieval_cap, *providers_.embed,
                                       providers_.experience_space);
        if (auto input = select_for_extraction(subset, p.median_count)) {
            out.suggestion =
                extract_suggestion(*input, *providers_.chat, templates_, ctx.key("extract")).text;
        } else {
            out.suggestion = kNoSuggestionSentinel;
        }
    }

    PromptBundle bundle;
    bundle.rules = rules;
    bundle.recent = recent;
    bundle.informative = informative;
    bundle.reflection = out.reflection;
    bundle.suggestion = out.suggestion;
    bundle.day = instr.day;
    bundle.phase = phase;
    bundle.ablation = mask;
    std::string prompt = assemble_prompt(bundle, templates_);

    int attempts_left = p.max_reprompts + 1;
    std::string step = "response";
    while (attempts_left-- > 0) {
        ChatRequest request;
        request.messages = {{"user", prompt}};
        request.tag = CallTag::CoT;
        request.key = ctx.key(step);
        request.options = instr.options;
        std::string raw;
        try {
            raw = providers_.chat->chat(request);
        } catch (const ProviderError&) {
            break;  // degrade to the default action
        }
        try {
            auto parsed = parse_agent_reply(raw, instr.expected, instr.legal_targets,
                                            instr.pass_allowed, me);
            out.action = parsed.action;
            out.talk = parsed.talk;
            return out;
        } catch (const UnparseableReplyError&) {
            step = "response:retry";
        }
    }
    out.action = default_action(instr);
    out.talk = default_text(out.action);
    return out;
}

RoundRecord RoundRunner::run(const GameConfig& config, int round_id,
                             const ExperiencePool* pool) const {
    RoundRecord record;
    record.round_id = round_id;
    record.seed = config.rng_seed;
    record.game = config;

    Moderator moderator(config, round_id);
    for (const auto& player : moderator.state().players) record.roles[player.id] = player.role;
    record.talk_order = moderator.state().talk_order;

    std::vector<ShortTermMemory> memories;
    memories.reserve(moderator.state().players.size());
    for (const auto& player : moderator.state().players) memories.emplace_back(player.id);

    long seq = 0;
    auto push_message = [&](MessageKind kind, PlayerId speaker, std::vector<PlayerId> audience,
                            Segment segment, int day, const std::string& text) {
        Message m;
        m.seq = seq++;
        m.round = round_id;
        m.day = day;
        m.segment = segment;
        m.kind = kind;
        m.speaker = speaker;
        m.audience = std::move(audience);
        m.text = text;
        m.info_score = score_informativeness(m);
        record.transcript.push_back(m);
        for (auto& memory : memories) memory.append(m);
    };

    try {
        while (!moderator.finished()) {
            ModeratorInstruction instr = moderator.current();
            push_message(MessageKind::System, kModerator, instr.audience, instr.segment,
                         instr.day, instr.text);
            if (!moderator.awaiting_response()) {
                moderator.advance();
                continue;
            }

            PlayerId actor = *instr.actor;
            TurnOutput turn;
            if (options_.mode == PipelineMode::Full) {
                turn = run_turn(moderator, instr, memories[actor - 1], pool, round_id);
            } else {
                turn = direct_turn(instr, round_id);
            }

            try {
                moderator.submit(turn.action);
            } catch (const IllegalActionError&) {
                // Parsing is restricted to the legal list, so this is a last
                // line of defense; fall back to the always-legal default.
                turn.action = default_action(instr);
                turn.talk = default_text(turn.action);
                moderator.submit(turn.action);
            }

            if (!turn.reflection.empty()) {
                push_message(MessageKind::Reflection, actor, {actor}, instr.segment, instr.day,
                             turn.reflection);
            }
            push_message(MessageKind::Response, actor, instr.response_audience, instr.segment,
                         instr.day, turn.talk);

            TurnInfo info;
            info.player = actor;
            info.day = instr.day;
            info.phase = instr.segment == Segment::Day ? Phase::Day : Phase::Night;
            info.step = action_kind_name(instr.expected);
            info.target = turn.action.target;
            info.reflection = turn.reflection;
            info.response = turn.talk;
            info.suggestion = turn.suggestion;
            record.turns.push_back(std::move(info));
        }
        record.outcome = moderator.result();
        record.t_max = moderator.t_max();
        record.valid = true;
    } catch (const FixtureError&) {
        throw;  // broken fixtures are test failures, not aborted rounds
    } catch (const std::exception&) {
        record.valid = false;
    }
    return record;
}

void finalize_round(ExperiencePool& pool, const RoundRecord& record, EmbeddingProvider& embed,
                    const EmbeddingSpace& space) {
    if (!record.valid || !record.outcome) throw InvariantError("cannot finalize an aborted round");
    if (record.t_max < 1) throw InvariantError("round ended before day 1");

    auto winners = record.winning_players();

    // One experience per (agent, day): prefer the day-talk turn.
    std::map<std::pair<PlayerId, int>, const TurnInfo*> chosen;
    for (const auto& turn : record.turns) {
        auto key = std::make_pair(turn.player, turn.day);
        auto it = chosen.find(key);
        bool is_talk = turn.phase == Phase::Day && turn.step == "talk";
        if (it == chosen.end()) {
            chosen[key] = &turn;
        } else {
            bool have_talk = it->second->phase == Phase::Day && it->second->step == "talk";
            if (is_talk || !have_talk) chosen[key] = &turn;
        }
    }

    std::vector<Experience> entries;
    entries.reserve(chosen.size());
    for (const auto& [key, turn] : chosen) {
        Experience e;
        e.reflection = turn->reflection;
        e.response = turn->response;
        e.score = score_round(record.t_max, winners.count(turn->player) > 0);
        e.round = record.round_id;
        e.day = turn->day;
        e.role = record.roles.at(turn->player);
        e.player = turn->player;
        e.embedding = embed.embed(space, e.reflection);
        entries.push_back(std::move(e));
    }
    pool.append_round(record.round_id, std::move(entries), space.id);
}

}  // namespace werewolf

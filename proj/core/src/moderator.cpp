#include "werewolf/moderator.hpp"

#include <algorithm>

namespace werewolf {

std::string render_options(const std::vector<PlayerId>& ids, bool with_pass) {
    std::string out = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += player_name(ids[i]);
    }
    if (with_pass) {
        if (!ids.empty()) out += ", ";
        out += "pass";
    }
    out += "]";
    return out;
}

namespace {

std::string player_list(const std::vector<PlayerId>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += player_name(ids[i]);
    }
    return out;
}

}  // namespace

Moderator::Moderator(GameConfig config, int round_id)
    : config_(std::move(config)), state_(new_round(config_, round_id)) {
    enter_stage(Stage::GameStart);
}

const ModeratorInstruction& Moderator::current() const {
    if (finished_) throw InvariantError("moderator already finished");
    return current_;
}

bool Moderator::awaiting_response() const { return !finished_ && current_.actor.has_value(); }

void Moderator::emit_broadcast(Segment segment, std::vector<PlayerId> audience, std::string text) {
    current_ = ModeratorInstruction{};
    current_.day = state_.day;
    current_.segment = segment;
    current_.audience = std::move(audience);
    current_.text = std::move(text);
}

void Moderator::emit_request(Segment segment, std::vector<PlayerId> audience, PlayerId actor,
                             ActionKind expected, std::vector<PlayerId> legal, std::string text,
                             std::vector<PlayerId> response_audience) {
    current_ = ModeratorInstruction{};
    current_.day = state_.day;
    current_.segment = segment;
    current_.audience = std::move(audience);
    current_.response_audience =
        response_audience.empty() ? current_.audience : std::move(response_audience);
    current_.actor = actor;
    current_.expected = expected;
    current_.legal_targets = std::move(legal);
    if (expected == ActionKind::Antidote) {
        current_.pass_allowed = false;
        current_.options = {"Yes", "No"};
    } else if (expected != ActionKind::Talk && expected != ActionKind::LastWords) {
        current_.options.reserve(current_.legal_targets.size() + 1);
        for (PlayerId id : current_.legal_targets) current_.options.push_back(player_name(id));
        current_.options.push_back("pass");
    }
    current_.text = std::move(text);
}

std::vector<PlayerId> Moderator::living_options() const { return state_.living_ids(); }

void Moderator::enter_stage(Stage stage) {
    stage_ = stage;
    cursor_ = 0;
    switch (stage) {
        case Stage::GameStart: {
            // Fixed announcement order, independent of the Role enum.
            const Role order[] = {Role::Werewolf, Role::Villager, Role::Guard, Role::Witch,
                                  Role::Seer};
            std::string text = "Now the game starts! In this game, we have";
            bool first = true;
            for (Role r : order) {
                if (config_.count(r) == 0) continue;
                text += first ? " " : ", ";
                text += std::to_string(config_.count(r)) + " " + role_name(r) + "(s)";
                first = false;
            }
            text += ".";
            emit_broadcast(Segment::Init, {}, text);
            break;
        }
        case Stage::RoleAssign: {
            PlayerId id = static_cast<PlayerId>(cursor_ + 1);
            emit_broadcast(Segment::Init, {id},
                           "You are " + role_name(state_.role_of(id)) + "!");
            break;
        }
        case Stage::NightOpen:
            begin_night();
            break;
        case Stage::WolfVotes:
            stage_actors_ = state_.living_wolves_in_talk_order();
            wolf_votes_.clear();
            prompt_wolf();
            break;
        case Stage::GuardStep:
            prompt_guard_or_skip();
            break;
        case Stage::WitchStep:
            prompt_witch_or_skip();
            break;
        case Stage::SeerStep:
            prompt_seer_or_skip();
            break;
        case Stage::SeerReveal: {
            bool is_wolf = state_.role_of(*seer_target_) == Role::Werewolf;
            auto seer = state_.living_with_role(Role::Seer);
            emit_broadcast(Segment::Night, seer,
                           player_name(*seer_target_) +
                               (is_wolf ? " is a werewolf!" : " is not a werewolf!"));
            break;
        }
        case Stage::Sunrise:
            begin_dawn();
            break;
        case Stage::DeathAnnounce:
            announce_next_death();
            break;
        case Stage::TalkRound:
            stage_actors_ = state_.living_in_talk_order();
            prompt_talk();
            break;
        case Stage::VoteRound:
            stage_actors_ = state_.living_in_talk_order();
            day_votes_.clear();
            prompt_vote();
            break;
        case Stage::ElimAnnounce:
            // The announcement doubles as the last-words prompt.
            state_.player(*eliminated_).alive = false;
            emit_request(Segment::Day, {}, *eliminated_, ActionKind::LastWords, {},
                         player_name(*eliminated_) +
                             " will be killed! You can make a brief last statement.");
            break;
        case Stage::GameOver: {
            std::string text;
            switch (*victory_) {
                case Victory::VillagerSide: text = "Game over, the villager wins!"; break;
                case Victory::WolfSide: text = "Game over, the werewolf wins!"; break;
                case Victory::Cutoff: text = "Game over, no one wins!"; break;
            }
            emit_broadcast(Segment::Day, {}, text);
            current_.day = t_max_;
            break;
        }
        case Stage::Finished:
            finished_ = true;
            break;
    }
}

void Moderator::begin_night() {
    night::begin(state_);
    poison_victim_.reset();
    seer_target_.reset();
    eliminated_.reset();
    std::string text = "It's dark, everyone close your eyes.";
    if (state_.day == 1) text += " I will talk with you/your team secretly at night.";
    emit_broadcast(Segment::Night, {}, text);
}

void Moderator::prompt_wolf() {
    PlayerId actor = stage_actors_[cursor_];
    auto legal = living_options();
    std::string opts = render_options(legal, true);
    std::string text;
    if (cursor_ == 0 && state_.day == 1) {
        text = "Werewolves, please open your eyes! I secrecly tell you that " +
               player_list(stage_actors_) + " are all of the " +
               std::to_string(stage_actors_.size()) +
               " werewolves! Keep in mind you are teammates. The rest players are not "
               "werewolves. Now vote and tell your teammates which of the players should be "
               "killed tonight. The first werewolf, you, randomly choose one from the following "
               "living options please: " +
               opts + ".";
    } else if (cursor_ == 0 && stage_actors_.size() >= 2) {
        text = "Werewolves, please open your eyes! Now vote and tell your teammates which of "
               "the players should be killed tonight. You " +
               player_name(actor) +
               " only choose one from the following living options please: " + opts + ".";
    } else {
        text = "The next werewolf, you " + player_name(actor) +
               ", please vote and tell your teammates that which of the players should be "
               "killed tonight. You only choose one from the following living options please: " +
               opts + ".";
    }
    emit_request(Segment::Night, stage_actors_, actor, ActionKind::WolfVote, legal, text);
}

void Moderator::prompt_guard_or_skip() {
    auto guards = state_.living_with_role(Role::Guard);
    if (guards.empty()) {
        next_after(Stage::GuardStep);
        return;
    }
    PlayerId guard = guards.front();
    auto legal = living_options();
    if (config_.strict_guard_rule && state_.guard_last_target)
        std::erase(legal, *state_.guard_last_target);
    emit_request(Segment::Night, {guard}, guard, ActionKind::Protect, legal,
                 "You guard, " + player_name(guard) +
                     ", please open your eyes! Now tell me who you protect tonight? You only "
                     "choose one from the following living options please: " +
                     render_options(legal, true) + ".");
}

void Moderator::prompt_witch_or_skip() {
    auto witches = state_.living_with_role(Role::Witch);
    if (witches.empty()) {
        next_after(Stage::WitchStep);
        return;
    }
    PlayerId witch = witches.front();
    if (state_.pending_kill && state_.witch_antidote_available) {
        witch_antidote_question_ = true;
        emit_request(Segment::Night, {witch}, witch, ActionKind::Antidote, {},
                     "You witch, " + player_name(witch) + ", please open your eyes! " +
                         player_name(*state_.pending_kill) +
                         " will be killed tonight. You have a bottle of antidote, do you want to "
                         "save him? Must choose only one from the following options: [Yes, No]");
        return;
    }
    if (state_.witch_poison_available) {
        witch_antidote_question_ = false;
        auto legal = living_options();
        emit_request(Segment::Night, {witch}, witch, ActionKind::Poison, legal,
                     "You witch, " + player_name(witch) +
                         ", please open your eyes! You have a bottle of poison, who are you "
                         "going to kill tonight? Choose one from the following living options: " +
                         render_options(legal, true) + ".");
        return;
    }
    next_after(Stage::WitchStep);  // both potions spent: step skipped entirely
}

void Moderator::prompt_seer_or_skip() {
    auto seers = state_.living_with_role(Role::Seer);
    if (seers.empty()) {
        next_after(Stage::SeerStep);
        return;
    }
    PlayerId seer = seers.front();
    auto legal = living_options();
    emit_request(Segment::Night, {seer}, seer, ActionKind::Verify, legal,
                 "You seer, " + player_name(seer) +
                     ", please open your eyes! Who are you going to verify its identity tonight? "
                     "Choose only one from the following living options: " +
                     render_options(legal, true) + ".");
}

void Moderator::begin_dawn() {
    night::end(state_);
    deaths_to_announce_ = state_.deaths_tonight;
    emit_broadcast(Segment::Day, {},
                   "The sun rose. Everyone woke up except those who had been killed.");
}

void Moderator::announce_next_death() {
    if (deaths_to_announce_.empty()) {
        emit_broadcast(Segment::Day, {}, "It was a peaceful night and no one died!");
        return;
    }
    emit_broadcast(Segment::Day, {},
                   player_name(deaths_to_announce_[cursor_]) + " died last night!");
}

void Moderator::check_dawn_victory() {
    if (auto v = check_victory(state_, config_)) {
        finish_game(*v);
    } else {
        enter_stage(Stage::TalkRound);
    }
}

void Moderator::prompt_talk() {
    PlayerId actor = stage_actors_[cursor_];
    if (cursor_ == 0) {
        emit_request(
            Segment::Day, {}, actor, ActionKind::Talk, {},
            "Now freely talk about roles of other players with each other based on your "
            "observation and reflection with few sentences. Decide whether to reveal your "
            "identity based on your reflection. The first " +
                player_name(actor) + ", you please.");
    } else {
        emit_request(
            Segment::Day, {actor}, actor, ActionKind::Talk, {},
            "The next " + player_name(actor) +
                ", you, continue talking with other players based on your observation and "
                "reflection with few sentences. Decide whether to reveal your identity based on "
                "your reflection.",
            {});
    }
    current_.response_audience = {};  // talk is public
}

void Moderator::prompt_vote() {
    PlayerId actor = stage_actors_[cursor_];
    auto legal = living_options();
    std::string opts = render_options(legal, true);
    if (cursor_ == 0) {
        emit_request(Segment::Day, {}, actor, ActionKind::DayVote, legal,
                     "Now you " + player_name(actor) +
                         " are asked to choose which of the players should be voted for killing "
                         "based on the discussion? Don't mention your role. You only choose one "
                         "from the following living options please: " +
                         opts + ". For example: I vote to kill Player...");
    } else {
        emit_request(Segment::Day, {actor}, actor, ActionKind::DayVote, legal,
                     "The next " + player_name(actor) +
                         ", you, continue voting the players should be killed based on the "
                         "discussion? Don't mention your role. Only choose one from the "
                         "following living options please: " +
                         opts + ". For example: I vote to kill Player...");
    }
    current_.response_audience = {};  // votes are public
}

void Moderator::resolve_votes() {
    eliminated_ = resolve_day_vote(state_, day_votes_, config_.day_vote_rule);
    if (eliminated_) {
        enter_stage(Stage::ElimAnnounce);
    } else {
        finish_day();
    }
}

void Moderator::finish_day() {
    if (auto v = check_victory(state_, config_)) {
        finish_game(*v);
        return;
    }
    state_.day += 1;
    if (auto v = check_victory(state_, config_)) {  // cutoff
        finish_game(*v);
        return;
    }
    enter_stage(Stage::NightOpen);
}

void Moderator::finish_game(Victory v) {
    victory_ = v;
    t_max_ = v == Victory::Cutoff ? config_.max_days : state_.day;
    enter_stage(Stage::GameOver);
}

void Moderator::next_after(Stage done) {
    switch (done) {
        case Stage::GameStart:
            enter_stage(Stage::RoleAssign);
            break;
        case Stage::RoleAssign:
            if (++cursor_ < state_.players.size()) {
                PlayerId id = static_cast<PlayerId>(cursor_ + 1);
                emit_broadcast(Segment::Init, {id},
                               "You are " + role_name(state_.role_of(id)) + "!");
            } else {
                enter_stage(Stage::NightOpen);
            }
            break;
        case Stage::NightOpen:
            enter_stage(Stage::WolfVotes);
            break;
        case Stage::WolfVotes:
            if (++cursor_ < stage_actors_.size()) {
                prompt_wolf();
            } else {
                night::set_wolf_target(state_, resolve_wolf_vote(state_, wolf_votes_));
                enter_stage(Stage::GuardStep);
            }
            break;
        case Stage::GuardStep:
            night::guard_blocks(state_);
            stage_ = Stage::WitchStep;
            prompt_witch_or_skip();
            break;
        case Stage::WitchStep:
            night::apply_deaths(state_, poison_victim_);
            stage_ = Stage::SeerStep;
            prompt_seer_or_skip();
            break;
        case Stage::SeerStep:
            if (seer_target_) {
                enter_stage(Stage::SeerReveal);
            } else {
                enter_stage(Stage::Sunrise);
            }
            break;
        case Stage::SeerReveal:
            enter_stage(Stage::Sunrise);
            break;
        case Stage::Sunrise:
            enter_stage(Stage::DeathAnnounce);
            break;
        case Stage::DeathAnnounce:
            if (!deaths_to_announce_.empty() && ++cursor_ < deaths_to_announce_.size()) {
                announce_next_death();
            } else {
                check_dawn_victory();
            }
            break;
        case Stage::TalkRound:
            if (++cursor_ < stage_actors_.size()) {
                prompt_talk();
            } else {
                enter_stage(Stage::VoteRound);
            }
            break;
        case Stage::VoteRound:
            if (++cursor_ < stage_actors_.size()) {
                prompt_vote();
            } else {
                resolve_votes();
            }
            break;
        case Stage::ElimAnnounce:
            finish_day();
            break;
        case Stage::GameOver:
            enter_stage(Stage::Finished);
            break;
        case Stage::Finished:
            break;
    }
}

void Moderator::advance() {
    if (finished_) throw InvariantError("moderator already finished");
    if (awaiting_response()) throw InvariantError("instruction requires a response");
    next_after(stage_);
}

void Moderator::submit(const Action& action) {
    if (!awaiting_response()) throw InvariantError("no response expected");
    if (action.kind != current_.expected)
        throw IllegalActionError("expected " + action_kind_name(current_.expected) + ", got " +
                                 action_kind_name(action.kind));
    PlayerId actor = *current_.actor;

    switch (current_.expected) {
        case ActionKind::WolfVote:
        case ActionKind::Poison:
        case ActionKind::Verify:
        case ActionKind::DayVote:
        case ActionKind::Protect:
            if (action.target) {
                if (std::find(current_.legal_targets.begin(), current_.legal_targets.end(),
                              *action.target) == current_.legal_targets.end())
                    throw IllegalActionError(player_name(*action.target) +
                                             " is not a legal target");
            } else if (!current_.pass_allowed) {
                throw IllegalActionError("pass is not allowed here");
            }
            break;
        default:
            break;
    }

    switch (stage_) {
        case Stage::WolfVotes:
            wolf_votes_[actor] = action;
            break;
        case Stage::GuardStep:
            apply_guard(state_, actor, action, config_.strict_guard_rule);
            break;
        case Stage::WitchStep:
            if (witch_antidote_question_) {
                if (action.yes) {
                    state_.witch_antidote_available = false;
                    state_.pending_kill.reset();
                }
            } else if (action.target) {
                state_.witch_poison_available = false;
                poison_victim_ = action.target;
            }
            break;
        case Stage::SeerStep:
            seer_target_ = action.target;
            break;
        case Stage::VoteRound:
            day_votes_[actor] = action;
            break;
        case Stage::TalkRound:
        case Stage::ElimAnnounce:
            break;
        default:
            throw InvariantError("unexpected submit in this stage");
    }
    next_after(stage_);
}

}  // namespace werewolf

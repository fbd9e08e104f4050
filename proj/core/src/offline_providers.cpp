#include "werewolf/offline_providers.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "werewolf/checksum.hpp"
#include "werewolf/rng.hpp"

namespace werewolf {

namespace {

std::optional<PlayerId> option_player(const std::string& option) {
    if (option.rfind("Player ", 0) == 0) return std::stoi(option.substr(7));
    return std::nullopt;
}

const char* kTalkLines[] = {
    "I have nothing concrete to share yet, let's keep observing each other.",
    "I still have no clear suspicions, but we should watch the quiet players.",
    "Let's keep sharing observations before we point fingers.",
    "Someone is not telling the truth, but I need more evidence.",
};

}  // namespace

std::string ScriptedChat::chat(const ChatRequest& request) {
    std::string key_str =
        request.key ? request.key->to_string() : request.last_text();
    SplitMix64 rng(mix_seed(seed_, fnv1a64(key_str)));

    if (!request.options.empty()) {
        // Yes/No question.
        if (request.options.front() == "Yes") {
            bool yes = strategy_ == Strategy::FirstTarget ? true : rng.below(2) == 0;
            return yes ? "Yes, I will use it." : "No, not tonight.";
        }
        std::string choice;
        if (strategy_ == Strategy::FirstTarget) {
            choice = "pass";
            for (const auto& opt : request.options) {
                auto id = option_player(opt);
                if (id && (!request.key || *id != request.key->speaker)) {
                    choice = opt;
                    break;
                }
            }
        } else {
            choice = request.options[rng.below(request.options.size())];
        }
        if (choice == "pass") return "I choose to pass.";
        return "I choose " + choice + ".";
    }

    const std::string step = request.key ? request.key->step : "";
    if (step.rfind("select_questions", 0) == 0)
        return "What is the current phase?#Who looks suspicious right now?";
    if (step.rfind("ask_questions", 0) == 0)
        return "Who is the most suspicious player now?#Should I reveal my role?";
    if (step.rfind("answer", 0) == 0) return "I am not sure yet.";
    if (step.rfind("reflect", 0) == 0)
        return "I observed the discussion and will stay cautious for now.";
    if (step.rfind("extract", 0) == 0)
        return "The best way for you to do under such reflection is to act on your own analysis.";
    return kTalkLines[rng.below(std::size(kTalkLines))];
}

ReplayChat::ReplayChat(const std::vector<Message>& transcript) {
    for (const auto& m : transcript) {
        if (m.kind != MessageKind::Response) continue;
        lines_[{m.day, m.phase(), m.speaker}].push_back(m.text);
    }
}

std::string ReplayChat::chat(const ChatRequest& request) {
    if (!request.key) throw FixtureError("replay chat needs a turn key");
    std::lock_guard lock(mutex_);
    auto it = lines_.find({request.key->day, request.key->phase, request.key->speaker});
    if (it == lines_.end() || it->second.empty())
        throw FixtureError("no fixture line for " + request.key->to_string());
    std::string text = it->second.front();
    it->second.pop_front();
    return text;
}

std::vector<double> HashEmbed::embed(const EmbeddingSpace& space, const std::string& text) {
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find({space.id, text});
        if (it != cache_.end()) return it->second;
    }

    std::vector<double> v(static_cast<std::size_t>(space.dimension), 0.0);
    bool any = false;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        any = true;
        SplitMix64 g(mix_seed(seed_ ^ fnv1a64(space.id), fnv1a64(token)));
        for (double& x : v) x += g.unit() * 2.0 - 1.0;
        token.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();
        }
    }
    flush();
    if (!any) {
        v[0] = 1.0;  // tokenless text still gets a stable unit vector
    }
    normalize(v);

    std::lock_guard lock(mutex_);
    cache_.emplace(std::make_pair(space.id, text), v);
    return v;
}

std::string FaultInjectingChat::chat(const ChatRequest& request) {
    long n;
    {
        std::lock_guard lock(mutex_);
        n = ++counter_;
    }
    if (fail_calls_.count(n)) throw ProviderError("injected failure on call " + std::to_string(n));
    if (fail_rate_ > 0.0) {
        SplitMix64 g(mix_seed(seed_, static_cast<std::uint64_t>(n)));
        if (g.unit() < fail_rate_) throw ProviderError("injected random failure");
    }
    return inner_->chat(request);
}

long FaultInjectingChat::calls_seen() const {
    std::lock_guard lock(mutex_);
    return counter_;
}

CachingChat::CachingChat(std::shared_ptr<ChatProvider> inner, std::string cache_path)
    : inner_(std::move(inner)), path_(std::move(cache_path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        cache_[j.at("key").get<std::string>()] = j.at("response").get<std::string>();
    }
}

std::string CachingChat::chat(const ChatRequest& request) {
    std::string blob = std::to_string(request.effective_temperature());
    for (const auto& [role, content] : request.messages) blob += "\x1f" + role + "\x1e" + content;
    std::string key = std::to_string(fnv1a64(blob));
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    std::string response = inner_->chat(request);
    std::lock_guard lock(mutex_);
    cache_[key] = response;
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        nlohmann::json j{{"key", key}, {"response", response}};
        out << j.dump() << "\n";
    }
    return response;
}

}  // namespace werewolf

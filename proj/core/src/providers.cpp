#include "werewolf/providers.hpp"

#include <cmath>

namespace werewolf {

std::string TurnKey::to_string() const {
    return "r" + std::to_string(round) + "/d" + std::to_string(day) + "/" + phase_name(phase) +
           "/p" + std::to_string(speaker) + "/" + step;
}

const std::string& ChatRequest::last_text() const {
    if (messages.empty()) throw InvariantError("empty chat request");
    return messages.back().second;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InvariantError("vector dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double na = std::sqrt(dot(a, a));
    double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

void normalize(std::vector<double>& v) {
    double n = std::sqrt(dot(v, v));
    if (n == 0.0) return;
    for (double& x : v) x /= n;
}

void CallLog::record_chat(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    chat_.push_back(ChatEntry{request.key.value_or(TurnKey{}), request.tag,
                              request.effective_temperature()});
}

void CallLog::record_embed(const std::string& space_id) {
    std::lock_guard lock(mutex_);
    embeds_.push_back(space_id);
}

std::vector<CallLog::ChatEntry> CallLog::chat_entries() const {
    std::lock_guard lock(mutex_);
    return chat_;
}

long CallLog::chat_count() const {
    std::lock_guard lock(mutex_);
    return static_cast<long>(chat_.size());
}

long CallLog::chat_count_with_step(const std::string& step_prefix) const {
    std::lock_guard lock(mutex_);
    long n = 0;
    for (const auto& e : chat_)
        if (e.key.step.rfind(step_prefix, 0) == 0) ++n;
    return n;
}

long CallLog::embed_count(const std::string& space_id) const {
    std::lock_guard lock(mutex_);
    long n = 0;
    for (const auto& s : embeds_)
        if (s == space_id) ++n;
    return n;
}

void CallLog::clear() {
    std::lock_guard lock(mutex_);
    chat_.clear();
    embeds_.clear();
}

}  // namespace werewolf

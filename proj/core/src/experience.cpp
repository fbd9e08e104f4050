#include "werewolf/experience.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "werewolf/cognition.hpp"

namespace werewolf {

int score_round(int t_max, bool agent_won) {
    if (t_max < 1 || t_max >= 1000)
        throw InvariantError("t_max out of range: " + std::to_string(t_max));
    return agent_won ? 1000 - t_max : t_max;
}

void ExperiencePool::append_round(int round_id, std::vector<Experience> entries,
                                  const std::string& space_id) {
    if (space_id_.empty()) space_id_ = space_id;
    if (space_id_ != space_id)
        throw InvariantError("pool holds embeddings from space " + space_id_ + ", got " +
                             space_id);
    entries_.insert(entries_.end(), std::make_move_iterator(entries.begin()),
                    std::make_move_iterator(entries.end()));
    provenance_.push_back(round_id);
    ++version_;
}

namespace {

nlohmann::json experience_to_json(const Experience& e) {
    nlohmann::json j;
    j["reflection"] = e.reflection;
    j["response"] = e.response;
    j["score"] = e.score;
    j["round"] = e.round;
    j["day"] = e.day;
    j["role"] = role_name(e.role);
    j["player"] = e.player;
    j["embedding"] = e.embedding;
    return j;
}

Experience experience_from_json(const nlohmann::json& j) {
    Experience e;
    e.reflection = j.at("reflection").get<std::string>();
    e.response = j.at("response").get<std::string>();
    e.score = j.at("score").get<int>();
    e.round = j.at("round").get<int>();
    e.day = j.at("day").get<int>();
    auto role = role_from_name(j.at("role").get<std::string>());
    if (!role) throw IoError("bad role in experience record");
    e.role = *role;
    e.player = j.at("player").get<PlayerId>();
    e.embedding = j.at("embedding").get<std::vector<double>>();
    return e;
}

}  // namespace

void ExperiencePool::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write pool: " + path);
    nlohmann::json header;
    header["schema_version"] = 1;
    header["embedding_space_id"] = space_id_;
    header["provenance"] = provenance_;
    header["version"] = version_;
    out << header.dump() << "\n";
    for (const auto& e : entries_) out << experience_to_json(e).dump() << "\n";
}

ExperiencePool ExperiencePool::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open pool: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty pool file: " + path);
    auto header = nlohmann::json::parse(line);
    if (header.at("schema_version").get<int>() != 1)
        throw IoError("unsupported pool schema version");

    ExperiencePool pool;
    pool.space_id_ = header.at("embedding_space_id").get<std::string>();
    pool.provenance_ = header.at("provenance").get<std::vector<int>>();
    pool.version_ = header.at("version").get<int>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        pool.entries_.push_back(experience_from_json(nlohmann::json::parse(line)));
    }
    return pool;
}

void ExperiencePool::check_space(const EmbeddingSpace& space) const {
    if (entries_.empty()) return;
    if (space_id_ != space.id)
        throw ConfigError("pool embeddings come from space '" + space_id_ +
                          "' but the configured space is '" + space.id + "'");
    if (static_cast<int>(entries_.front().embedding.size()) != space.dimension)
        throw ConfigError("pool embedding dimension does not match the configured space");
}

std::vector<Experience> retrieve_similar(const ExperiencePool& pool, const std::string& reflection,
                                         double threshold, int cap, EmbeddingProvider& embed,
                                         const EmbeddingSpace& space) {
    if (pool.empty()) return {};
    std::vector<double> query;
    try {
        query = embed.embed(space, reflection);
    } catch (const ProviderError&) {
        return {};  // suggestion degrades to the sentinel
    }

    const auto& entries = pool.entries();
    std::vector<std::pair<double, std::size_t>> hits;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        double sim = cosine(query, entries[i].embedding);
        if (sim > threshold) hits.emplace_back(sim, i);
    }
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (cap >= 0 && hits.size() > static_cast<std::size_t>(cap)) hits.resize(cap);

    std::vector<Experience> out;
    out.reserve(hits.size());
    for (const auto& [sim, idx] : hits) out.push_back(entries[idx]);
    return out;
}

std::optional<ExtractionInput> select_for_extraction(const std::vector<Experience>& subset,
                                                     int n_median) {
    if (subset.size() < 2) return std::nullopt;

    std::vector<std::size_t> order(subset.size());
    std::iota(order.begin(), order.end(), 0);
    // Stable on input order, so equal scores resolve to the earliest entry.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return subset[a].score < subset[b].score; });

    ExtractionInput out;
    out.worst = subset[order.front()];

    std::vector<std::size_t> rest(order.begin() + 1, order.end());
    std::size_t m = rest.size();
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(n_median, 1)), m);
    std::size_t median = (m - 1) / 2;
    std::size_t start = median >= k / 2 ? median - k / 2 : 0;
    start = std::min(start, m - k);
    for (std::size_t i = start; i < start + k; ++i) out.median.push_back(subset[rest[i]]);
    return out;
}

Suggestion extract_suggestion(const ExtractionInput& input, ChatProvider& chat,
                              const PromptTemplates& templates, const TurnKey& key) {
    std::string set_text;
    for (std::size_t i = 0; i < input.median.size(); ++i) {
        if (i) set_text += " ";
        set_text += std::to_string(i + 1) + ". " + input.median[i].response;
    }
    std::string prompt = templates.render("extract_suggestion",
                                          {{"bad_experience", input.worst.response},
                                           {"experience_set", set_text}});
    ChatRequest request;
    request.messages = {{"user", prompt}};
    request.tag = CallTag::Auxiliary;
    request.key = key;

    try {
        std::string reply = chat.chat(request);
        if (reply.empty()) return {kNoSuggestionSentinel, false};
        if (reply.find(kNoSuggestionSentinel) != std::string::npos)
            return {kNoSuggestionSentinel, false};
        return {truncate_sentences(reply, 1), true};
    } catch (const ProviderError&) {
        return {kNoSuggestionSentinel, false};
    }
}

}  // namespace werewolf

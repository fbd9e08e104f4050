#include "werewolf/experiment.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "werewolf/checksum.hpp"
#include "werewolf/offline_providers.hpp"
#include "werewolf/rng.hpp"

namespace werewolf {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("expected a boolean for " + key + ", got '" + value + "'");
}

std::set<Role> parse_roles(const std::string& csv, const std::string& key) {
    std::set<Role> out;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        auto role = role_from_name(token);
        if (!role) throw ConfigError("unknown role '" + token + "' in " + key);
        out.insert(*role);
    }
    return out;
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    if (key == "rounds") rounds = std::stoi(value);
    else if (key == "pool_build_rounds") pool_build_rounds = std::stoi(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "workers") workers = std::stoi(value);
    else if (key == "out_dir") out_dir = value;
    else if (key == "data_dir") data_dir = value;
    else if (key == "label") label = value;
    else if (key == "ablation") ablation = ablation_from_string(value);
    else if (key == "experience_sides") experience_sides = parse_roles(value, key);
    else if (key == "max_days") game.max_days = std::stoi(value);
    else if (key == "strict_guard_rule") game.strict_guard_rule = parse_bool(value, key);
    else if (key == "day_vote_rule") {
        auto rule = day_vote_rule_from_name(value);
        if (!rule) throw ConfigError("unknown day_vote_rule '" + value + "'");
        game.day_vote_rule = *rule;
    } else if (key.rfind("roles.", 0) == 0) {
        auto role = role_from_name(key.substr(6));
        if (!role) throw ConfigError("unknown role in key " + key);
        game.role_counts[*role] = std::stoi(value);
    }
    else if (key == "pipeline.recent_window") pipeline.recent_window = std::stoi(value);
    else if (key == "pipeline.informative_top") pipeline.informative_top = std::stoi(value);
    else if (key == "pipeline.select_count") pipeline.select_count = std::stoi(value);
    else if (key == "pipeline.ask_count") pipeline.ask_count = std::stoi(value);
    else if (key == "pipeline.evidence_top") pipeline.evidence_top = std::stoi(value);
    else if (key == "pipeline.similarity_threshold")
        pipeline.similarity_threshold = std::stod(value);
    else if (key == "pipeline.retrieval_cap") pipeline.retrieval_cap = std::stoi(value);
    else if (key == "pipeline.median_count") pipeline.median_count = std::stoi(value);
    else if (key == "pipeline.max_reprompts") pipeline.max_reprompts = std::stoi(value);
    else if (key == "chat.provider") chat_provider = value;
    else if (key == "chat.endpoint") remote_chat.endpoint = value;
    else if (key == "chat.model") remote_chat.model = value;
    else if (key == "chat.api_key_env") remote_chat.api_key_env = value;
    else if (key == "chat.max_attempts") remote_chat.retry.max_attempts = std::stoi(value);
    else if (key == "chat.requests_per_minute")
        remote_chat.limit.requests_per_minute = std::stoi(value);
    else if (key == "chat.max_inflight") remote_chat.limit.max_inflight = std::stoi(value);
    else if (key == "chat.cache") cache_responses = parse_bool(value, key);
    else if (key == "chat.cache_path") cache_path = value;
    else if (key == "embed.provider") embed_provider = value;
    else if (key == "embed.dimension") embed_dimension = std::stoi(value);
    else if (key == "embed.api_key_env") remote_embed.api_key_env = value;
    else if (key == "embed.qa.endpoint") remote_embed.spaces["qa"].endpoint = value;
    else if (key == "embed.qa.model") qa_model = value;
    else if (key == "embed.experience.endpoint")
        remote_embed.spaces["experience"].endpoint = value;
    else if (key == "embed.experience.model") experience_model = value;
    else throw ConfigError("unknown config key: " + key);
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            config.apply(key, value);
        } catch (const std::invalid_argument&) {
            throw ConfigError("line " + std::to_string(line_no) + ": bad value for " + key);
        }
    }
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

void ExperimentConfig::validate() const {
    game.validate();
    if (rounds < 0) throw ConfigError("rounds must be >= 0");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (ablation.count(PromptPart::Z))
        throw ConfigError("the rules part Z cannot be ablated in a runnable config");
    if (pipeline.similarity_threshold < 0.0 || pipeline.similarity_threshold > 1.0)
        throw ConfigError("similarity_threshold must be in [0, 1]");
    if (chat_provider != "scripted-uniform" && chat_provider != "scripted-first" &&
        chat_provider != "remote")
        throw ConfigError("unknown chat provider: " + chat_provider);
    if (embed_provider != "hash" && embed_provider != "remote")
        throw ConfigError("unknown embed provider: " + embed_provider);
}

std::string ExperimentConfig::fingerprint() const {
    std::ostringstream ss;
    ss << rounds << "|" << pool_build_rounds << "|" << seed << "|"
       << ablation_to_string(ablation) << "|";
    for (Role r : experience_sides) ss << role_name(r) << ",";
    ss << "|" << game.max_days << "|" << game.strict_guard_rule << "|"
       << day_vote_rule_name(game.day_vote_rule) << "|";
    for (const auto& [role, count] : game.role_counts) ss << role_name(role) << ":" << count << ",";
    ss << "|" << pipeline.recent_window << "/" << pipeline.informative_top << "/"
       << pipeline.select_count << "/" << pipeline.ask_count << "/" << pipeline.evidence_top
       << "/" << pipeline.similarity_threshold << "/" << pipeline.retrieval_cap << "/"
       << pipeline.median_count << "|" << chat_provider << "|" << embed_provider << "|"
       << embed_dimension;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ss.str())));
    return buf;
}

ProviderSet make_providers(const ExperimentConfig& config) {
    ProviderSet set;
    set.log = std::make_shared<CallLog>();

    std::shared_ptr<ChatProvider> chat;
    if (config.chat_provider == "scripted-uniform") {
        chat = std::make_shared<ScriptedChat>(config.seed, ScriptedChat::Strategy::UniformRandom);
    } else if (config.chat_provider == "scripted-first") {
        chat = std::make_shared<ScriptedChat>(config.seed, ScriptedChat::Strategy::FirstTarget);
    } else {
        chat = std::make_shared<RemoteChat>(config.remote_chat);
    }
    if (config.cache_responses) chat = std::make_shared<CachingChat>(chat, config.cache_path);
    set.providers.chat = std::make_shared<LoggedChat>(chat, set.log);

    std::shared_ptr<EmbeddingProvider> embed;
    if (config.embed_provider == "hash") {
        embed = std::make_shared<HashEmbed>(config.seed);
    } else {
        RemoteEmbedConfig remote = config.remote_embed;
        remote.spaces["qa"].model = config.qa_model;
        remote.spaces["experience"].model = config.experience_model;
        embed = std::make_shared<RemoteEmbed>(remote);
    }
    set.providers.embed = std::make_shared<LoggedEmbed>(embed, set.log);

    set.providers.qa_space = EmbeddingSpace{"qa", config.qa_model, config.embed_dimension};
    set.providers.experience_space =
        EmbeddingSpace{"experience", config.experience_model, config.embed_dimension};
    return set;
}

namespace {

// Runs [first, first+count) rounds on a small worker pool. Results come back
// indexed, so scheduling cannot change anything downstream.
std::vector<RoundRecord> run_rounds(const ExperimentConfig& config, const ProviderSet& providers,
                                    const ExperiencePool* pool, const RunnerOptions& options,
                                    int first_round_id, int count) {
    QuestionBank bank = QuestionBank::load_default(config.data_dir);
    PromptTemplates templates = PromptTemplates::load_default(config.data_dir);
    RoundRunner runner(providers.providers, bank, templates, options);

    GameConfig game = config.game;
    game.rng_seed = config.seed;

    std::vector<RoundRecord> records(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            records[static_cast<std::size_t>(i)] = runner.run(game, first_round_id + i, pool);
            records[static_cast<std::size_t>(i)].config_fingerprint = config.fingerprint();
        }
    };
    int threads = std::min(config.workers, count);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) workers.emplace_back(work);
        for (auto& w : workers) w.join();
    }
    return records;
}

}  // namespace

ExperiencePool build_pool(const ExperimentConfig& config, int rounds, const ProviderSet& providers,
                          int first_round_id, std::vector<int>* skipped) {
    if (rounds <= 0) throw ConfigError("pool building needs at least one round");

    RunnerOptions options;
    options.pipeline = config.pipeline;
    options.ablation = config.ablation;
    options.experience_sides = config.experience_sides;
    options.mode = PipelineMode::Full;
    options.use_suggestions = false;  // part 3 stays out while the pool is built

    auto records = run_rounds(config, providers, nullptr, options, first_round_id, rounds);

    ExperiencePool pool;
    for (const auto& record : records) {
        if (!record.valid || !record.outcome) {
            if (skipped) skipped->push_back(record.round_id);
            continue;
        }
        finalize_round(pool, record, *providers.providers.embed,
                       providers.providers.experience_space);
    }
    return pool;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ProviderSet& providers,
                                const ExperiencePool* pool, int first_round_id) {
    RunnerOptions options;
    options.pipeline = config.pipeline;
    options.ablation = config.ablation;
    options.experience_sides = config.experience_sides;
    options.mode = PipelineMode::Full;
    options.use_suggestions = true;

    if (pool && !pool->empty()) pool->check_space(providers.providers.experience_space);

    ExperimentResult result;
    result.records =
        run_rounds(config, providers, pool, options, first_round_id, config.rounds);
    result.report = aggregate_metrics(result.records, config.rounds, mix_seed(config.seed, 77),
                                      "rule-based-v1", config.label);
    return result;
}

void export_annotation_sample(
    const std::vector<std::pair<std::string, const std::vector<RoundRecord>*>>& labeled, int k,
    std::uint64_t seed, const std::string& path) {
    struct Candidate {
        const std::string* label;
        const RoundRecord* record;
        std::size_t index;
    };
    std::vector<Candidate> candidates;
    for (const auto& [label, records] : labeled) {
        for (const auto& record : *records) {
            for (std::size_t i = 0; i < record.transcript.size(); ++i) {
                if (record.transcript[i].kind == MessageKind::Response)
                    candidates.push_back({&label, &record, i});
            }
        }
    }
    if (static_cast<int>(candidates.size()) < k)
        throw ConfigError("need " + std::to_string(k) + " responses, only " +
                          std::to_string(candidates.size()) + " available");

    SplitMix64 rng(seed);
    rng.shuffle(candidates);
    candidates.resize(static_cast<std::size_t>(k));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write annotation sample: " + path);
    for (const auto& c : candidates) {
        const Message& m = c.record->transcript[c.index];
        nlohmann::json j;
        j["variant"] = *c.label;
        j["round_id"] = c.record->round_id;
        j["day"] = m.day;
        j["phase"] = segment_name(m.segment);
        j["speaker"] = m.speaker;
        j["role"] = role_name(c.record->roles.at(m.speaker));
        j["response"] = m.text;
        nlohmann::json context = nlohmann::json::array();
        std::size_t begin = c.index >= 5 ? c.index - 5 : 0;
        for (std::size_t i = begin; i < c.index; ++i)
            context.push_back(c.record->transcript[i].pretty_line());
        j["context"] = context;
        j["judgement"] = "";  // left for the human annotator
        out << j.dump() << "\n";
    }
}

void export_annotation_sample(const std::vector<RoundRecord>& records, int k, std::uint64_t seed,
                              const std::string& path, const std::string& variant_label) {
    export_annotation_sample({{variant_label, &records}}, k, seed, path);
}

}  // namespace werewolf

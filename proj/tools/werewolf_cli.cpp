// Command-line front end: play single rounds, build experience pools, run
// evaluation sweeps and ablations, replay recorded fixtures, and recompute
// metrics from stored round records.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "werewolf/experiment.hpp"
#include "werewolf/rng.hpp"
#include "werewolf/offline_providers.hpp"

namespace fs = std::filesystem;
using namespace werewolf;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string data_dir;
};

ExperimentConfig load_config(const GlobalArgs& args) {
    ExperimentConfig config;
    if (!args.config_path.empty()) config = ExperimentConfig::from_file(args.config_path);
    if (args.seed) config.seed = *args.seed;
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (!args.data_dir.empty()) config.data_dir = args.data_dir;
    config.validate();
    return config;
}

RunnerOptions runner_options(const ExperimentConfig& config, bool use_suggestions,
                             PipelineMode mode = PipelineMode::Full) {
    RunnerOptions options;
    options.pipeline = config.pipeline;
    options.ablation = config.ablation;
    options.experience_sides = config.experience_sides;
    options.mode = mode;
    options.use_suggestions = use_suggestions;
    return options;
}

void write_metrics(const MetricsReport& report, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream json_out(dir + "/metrics.json");
    json_out << report.to_json().dump(2) << "\n";
    std::ofstream csv_out(dir + "/metrics.csv");
    csv_out << report.to_csv();
}

void write_records(const std::vector<RoundRecord>& records, const std::string& dir) {
    fs::create_directories(dir);
    for (const auto& record : records) {
        char name[32];
        std::snprintf(name, sizeof name, "round_%05d.jsonl", record.round_id);
        record.save_jsonl(dir + "/" + name);
    }
}

std::vector<RoundRecord> read_records(const std::string& dir) {
    std::vector<RoundRecord> records;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".jsonl" &&
            entry.path().filename().string().rfind("round_", 0) == 0)
            paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) records.push_back(RoundRecord::load_jsonl(path.string()));
    return records;
}

int cmd_play(const GlobalArgs& global, int round_id, bool direct, const std::string& pool_path) {
    ExperimentConfig config = load_config(global);
    auto providers = make_providers(config);

    ExperiencePool pool;
    if (!pool_path.empty()) pool = ExperiencePool::load(pool_path);

    QuestionBank bank = QuestionBank::load_default(config.data_dir);
    PromptTemplates templates = PromptTemplates::load_default(config.data_dir);
    RoundRunner runner(providers.providers, bank, templates,
                       runner_options(config, true, direct ? PipelineMode::Direct
                                                           : PipelineMode::Full));
    GameConfig game = config.game;
    game.rng_seed = config.seed;
    RoundRecord record = runner.run(game, round_id, pool.empty() ? nullptr : &pool);
    record.config_fingerprint = config.fingerprint();

    std::cout << record.to_pretty();
    if (!config.out_dir.empty()) {
        write_records({record}, config.out_dir + "/rounds");
        std::cout << "\n[record written to " << config.out_dir << "/rounds]\n";
    }
    return 0;
}

int cmd_build_pool(const GlobalArgs& global, int rounds_flag, const std::string& pool_out) {
    ExperimentConfig config = load_config(global);
    int rounds = rounds_flag > 0 ? rounds_flag : config.pool_build_rounds;
    if (rounds <= 0) throw ConfigError("build-pool needs --rounds or pool_build_rounds > 0");

    auto providers = make_providers(config);
    std::vector<int> skipped;
    ExperiencePool pool = build_pool(config, rounds, providers, 0, &skipped);

    std::string path = pool_out.empty() ? config.out_dir + "/pool.jsonl" : pool_out;
    if (!fs::path(path).parent_path().empty())
        fs::create_directories(fs::path(path).parent_path());
    pool.save(path);
    std::cout << "pool: " << pool.size() << " experiences from " << pool.provenance().size()
              << " rounds (version " << pool.version() << ") -> " << path << "\n";
    for (int id : skipped) std::cout << "  skipped aborted round " << id << "\n";
    return 0;
}

int cmd_eval(const GlobalArgs& global, const std::string& pool_path) {
    ExperimentConfig config = load_config(global);
    auto providers = make_providers(config);

    ExperiencePool pool;
    if (!pool_path.empty()) {
        pool = ExperiencePool::load(pool_path);
    } else if (config.pool_build_rounds > 0) {
        pool = build_pool(config, config.pool_build_rounds, providers);
        fs::create_directories(config.out_dir);
        pool.save(config.out_dir + "/pool.jsonl");
    }

    auto result = run_experiment(config, providers, pool.empty() ? nullptr : &pool);
    write_records(result.records, config.out_dir + "/rounds");
    write_metrics(result.report, config.out_dir);
    std::cout << result.report.to_json().dump(2) << "\n";
    return 0;
}

int cmd_ablate(const GlobalArgs& global, const std::string& parts_csv, int annotation_k) {
    ExperimentConfig base = load_config(global);

    std::vector<std::string> variants{"full"};
    if (parts_csv.empty()) {
        for (const auto& part : {"O", "V", "Q", "R", "S", "C"}) variants.push_back(part);
    } else {
        AblationMask mask = ablation_from_string(parts_csv);
        for (PromptPart p : mask) variants.push_back(prompt_part_name(p));
    }

    std::vector<std::pair<std::string, std::vector<RoundRecord>>> all_records;
    for (const auto& variant : variants) {
        ExperimentConfig config = base;
        config.label = variant == "full" ? "full" : "no-" + variant;
        if (variant != "full") config.ablation.insert(*prompt_part_from_name(variant));
        config.validate();

        auto providers = make_providers(config);
        ExperiencePool pool;
        if (config.pool_build_rounds > 0)
            pool = build_pool(config, config.pool_build_rounds, providers);
        auto result = run_experiment(config, providers, pool.empty() ? nullptr : &pool);

        std::string dir = base.out_dir + "/ablation_" + config.label;
        write_records(result.records, dir + "/rounds");
        write_metrics(result.report, dir);
        std::cout << config.label << ": " << result.report.to_csv();
        all_records.emplace_back(config.label, std::move(result.records));
    }

    if (annotation_k > 0) {
        std::vector<std::pair<std::string, const std::vector<RoundRecord>*>> labeled;
        for (const auto& [label, records] : all_records) labeled.emplace_back(label, &records);
        fs::create_directories(base.out_dir);
        std::string path = base.out_dir + "/annotation_sample.jsonl";
        export_annotation_sample(labeled, annotation_k, base.seed, path);
        std::cout << "annotation sample (" << annotation_k << " responses) -> " << path << "\n";
    }
    return 0;
}

int cmd_replay(const GlobalArgs& global, const std::string& fixture_path,
               const std::string& pretty_out, const std::string& record_out) {
    ExperimentConfig config = load_config(global);

    RoundRecord fixture = RoundRecord::load_jsonl(fixture_path);
    GameConfig game = fixture.game;
    game.rng_seed = fixture.seed;

    Providers providers;
    providers.chat = std::make_shared<ReplayChat>(fixture.transcript);
    providers.embed = std::make_shared<HashEmbed>(config.seed);

    QuestionBank bank = QuestionBank::load_default(config.data_dir);
    PromptTemplates templates = PromptTemplates::load_default(config.data_dir);
    RoundRunner runner(providers, bank, templates,
                       runner_options(config, false, PipelineMode::Direct));
    RoundRecord record = runner.run(game, fixture.round_id, nullptr);

    if (!record.valid || !record.outcome) throw FixtureError("replayed round aborted");
    if (record.transcript.size() != fixture.transcript.size())
        throw FixtureError("replay produced " + std::to_string(record.transcript.size()) +
                           " messages, fixture has " +
                           std::to_string(fixture.transcript.size()));
    for (std::size_t i = 0; i < record.transcript.size(); ++i) {
        const Message& a = record.transcript[i];
        const Message& b = fixture.transcript[i];
        if (a.text != b.text || a.speaker != b.speaker || a.audience != b.audience ||
            a.day != b.day || a.segment != b.segment)
            throw FixtureError("replay diverges from the fixture at message " +
                               std::to_string(i) + ": " + a.pretty_line());
    }
    if (fixture.outcome && *record.outcome != *fixture.outcome)
        throw FixtureError("replayed outcome differs from the fixture");
    if (fixture.t_max > 0 && record.t_max != fixture.t_max)
        throw FixtureError("replayed duration differs from the fixture");

    std::cout << "replay ok: " << victory_name(*record.outcome) << " after " << record.t_max
              << " day(s), " << record.transcript.size() << " messages match\n";
    if (!pretty_out.empty()) {
        std::ofstream out(pretty_out);
        out << record.to_pretty();
    }
    if (!record_out.empty()) {
        record.config_fingerprint = fixture.config_fingerprint;
        record.save_jsonl(record_out);
    }
    return 0;
}

int cmd_report(const GlobalArgs& global, const std::string& records_dir) {
    ExperimentConfig config = load_config(global);
    auto records = read_records(records_dir);
    if (records.empty()) throw ConfigError("no round records under " + records_dir);
    auto report = aggregate_metrics(records, static_cast<int>(records.size()),
                                    mix_seed(config.seed, 77), "rule-based-v1", config.label);
    write_metrics(report, config.out_dir);
    std::cout << report.to_json().dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Werewolf communication-game engine and agent harness"};
    app.require_subcommand(1);

    GlobalArgs global;
    app.add_option("--config", global.config_path, "Experiment config file (key = value lines)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the config seed");
    app.add_option("--out", global.out_dir, "Override the output directory");
    app.add_option("--data-dir", global.data_dir, "Question bank / template directory");

    auto* play = app.add_subcommand("play", "Run one round and print the transcript");
    int round_id = 0;
    bool direct = false;
    std::string play_pool;
    play->add_option("--round-id", round_id, "Round id (seeds role assignment)");
    play->add_flag("--direct", direct, "Skip the reasoning pipeline (scripted agents only)");
    play->add_option("--pool", play_pool, "Experience pool to draw suggestions from");

    auto* build = app.add_subcommand("build-pool", "Run pool-building rounds and save the pool");
    int build_rounds = 0;
    std::string pool_out;
    build->add_option("--rounds", build_rounds, "Number of pool-building rounds");
    build->add_option("--pool-out", pool_out, "Pool output path (default <out>/pool.jsonl)");

    auto* eval = app.add_subcommand("eval", "Run evaluation rounds and write metrics");
    std::string eval_pool;
    eval->add_option("--pool", eval_pool, "Load this pool instead of building one");

    auto* ablate = app.add_subcommand("ablate", "Evaluate single-component ablation variants");
    std::string parts;
    int annotation_k = 0;
    ablate->add_option("--parts", parts, "Components to ablate (default O,V,Q,R,S,C)");
    ablate->add_option("--annotation-k", annotation_k,
                       "Export k responses for human annotation");

    auto* replay = app.add_subcommand("replay", "Replay a recorded round and verify it");
    std::string fixture_path, pretty_out, record_out;
    replay->add_option("--fixture", fixture_path, "Round record (JSONL)")->required();
    replay->add_option("--pretty-out", pretty_out, "Write the replayed pretty transcript here");
    replay->add_option("--record-out", record_out, "Write the replayed record here");

    auto* report = app.add_subcommand("report", "Recompute metrics from stored round records");
    std::string records_dir;
    report->add_option("--records", records_dir, "Directory of round_*.jsonl files")->required();

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) global.seed = seed_value;

    try {
        if (*play) return cmd_play(global, round_id, direct, play_pool);
        if (*build) return cmd_build_pool(global, build_rounds, pool_out);
        if (*eval) return cmd_eval(global, eval_pool);
        if (*ablate) return cmd_ablate(global, parts, annotation_k);
        if (*replay) return cmd_replay(global, fixture_path, pretty_out, record_out);
        if (*report) return cmd_report(global, records_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ProviderError& e) {
        std::cerr << "provider failure: " << e.what() << "\n";
        return 2;
    } catch (const FixtureError& e) {
        std::cerr << "invalid fixture: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "werewolf/message.hpp"
#include "werewolf/transcript.hpp"

#include <nlohmann/json.hpp>

namespace werewolf::testing {

// Seed that reproduces the golden round's role assignment and talk order.
inline constexpr std::uint64_t kGoldenSeed = 15914025ULL;

inline std::string fixture_path(const std::string& name) {
    return std::string(WEREWOLF_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw werewolf::IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<Message> load_messages_jsonl(const std::string& path) {
    std::vector<Message> out;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        if (j.contains("type")) continue;  // header / turn records
        out.push_back(Message::from_json(j));
    }
    return out;
}

inline GameConfig golden_config() {
    GameConfig config;
    config.rng_seed = kGoldenSeed;
    config.strict_guard_rule = false;  // the golden round repeats a protection
    return config;
}

inline RoundRecord load_golden_record() {
    return RoundRecord::load_jsonl(fixture_path("golden_round.jsonl"));
}

}  // namespace werewolf::testing

#include "werewolf/prompt_templates.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "werewolf/question_bank.hpp"

namespace werewolf {

PromptTemplates PromptTemplates::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open prompt templates: " + path);
    nlohmann::json j;
    in >> j;
    PromptTemplates t;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string()) t.templates_[key] = value.get<std::string>();
    }
    return t;
}

PromptTemplates PromptTemplates::load_default(const std::string& data_dir) {
    return load(default_data_dir(data_dir) + "/prompt_templates.json");
}

const std::string& PromptTemplates::raw(const std::string& key) const {
    auto it = templates_.find(key);
    if (it == templates_.end()) throw IoError("missing prompt template: " + key);
    return it->second;
}

std::string PromptTemplates::render(const std::string& key,
                                    const std::map<std::string, std::string>& values) const {
    const std::string& tpl = raw(key);
    std::string out;
    out.reserve(tpl.size());
    for (std::size_t i = 0; i < tpl.size();) {
        if (tpl[i] == '{') {
            auto end = tpl.find('}', i);
            if (end != std::string::npos) {
                std::string name = tpl.substr(i + 1, end - i - 1);
                auto it = values.find(name);
                if (it != values.end()) {
                    out += it->second;
                    i = end + 1;
                    continue;
                }
            }
        }
        out += tpl[i++];
    }
    return out;
}

std::string PromptTemplates::rules_for(PlayerId id, Role role, int player_count) const {
    return render("game_rules", {
                                    {"i", std::to_string(id)},
                                    {"role", role_name(role)},
                                    {"others", std::to_string(player_count - 1)},
                                });
}

std::string PromptTemplates::day_or_night(Phase phase) {
    return phase == Phase::Night ? "night" : "daytime";
}

}  // namespace werewolf

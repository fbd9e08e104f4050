#pragma once

#include <map>
#include <string>

#include "werewolf/types.hpp"

namespace werewolf {

// The prompt text blocks, loaded from the versioned data file and rendered
// by simple {placeholder} substitution.
class PromptTemplates {
public:
    static PromptTemplates load(const std::string& path);
    static PromptTemplates load_default(const std::string& data_dir = "");

    const std::string& raw(const std::string& key) const;
    std::string render(const std::string& key,
                       const std::map<std::string, std::string>& values) const;

    // The part-1 rules block for one agent.
    std::string rules_for(PlayerId id, Role role, int player_count) const;

    // "day" / "night" wording used by the {day_or_night} placeholder.
    static std::string day_or_night(Phase phase);

private:
    std::map<std::string, std::string> templates_;
};

}  // namespace werewolf

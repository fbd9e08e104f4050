#pragma once

#include <map>
#include <string>
#include <vector>

#include "werewolf/types.hpp"

namespace werewolf {

// Predefined reflection questions: six shared across all roles plus three
// per role, loaded from the versioned data file.
class QuestionBank {
public:
    static QuestionBank load(const std::string& path);
    // Resolves the data directory (env WEREWOLF_DATA_DIR or compiled default)
    // and loads the shipped file.
    static QuestionBank load_default(const std::string& data_dir = "");

    // shared first, then the role block; 9 candidates per role.
    std::vector<std::string> candidates(Role role) const;
    const std::vector<std::string>& shared() const { return shared_; }
    const std::vector<std::string>& for_role(Role role) const;

private:
    std::vector<std::string> shared_;
    std::map<Role, std::vector<std::string>> per_role_;
};

// Directory holding question_bank.json / prompt_templates.json.
std::string default_data_dir(const std::string& override_dir = "");

}  // namespace werewolf

#include "werewolf/question_bank.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

namespace werewolf {

std::string default_data_dir(const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("WEREWOLF_DATA_DIR")) return env;
#ifdef WEREWOLF_DEFAULT_DATA_DIR
    return WEREWOLF_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

QuestionBank QuestionBank::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open question bank: " + path);
    nlohmann::json j;
    in >> j;

    QuestionBank bank;
    bank.shared_ = j.at("shared").get<std::vector<std::string>>();
    for (Role r : kAllRoles)
        bank.per_role_[r] = j.at(role_name(r)).get<std::vector<std::string>>();
    return bank;
}

QuestionBank QuestionBank::load_default(const std::string& data_dir) {
    return load(default_data_dir(data_dir) + "/question_bank.json");
}

std::vector<std::string> QuestionBank::candidates(Role role) const {
    std::vector<std::string> out = shared_;
    const auto& extra = per_role_.at(role);
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
}

const std::vector<std::string>& QuestionBank::for_role(Role role) const {
    return per_role_.at(role);
}

}  // namespace werewolf

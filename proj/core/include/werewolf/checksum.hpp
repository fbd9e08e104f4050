#pragma once

#include <cstdint>
#include <string>

namespace werewolf {

std::uint64_t fnv1a64(const std::string& data);
std::uint64_t fnv1a64_file(const std::string& path);  // throws IoError

}  // namespace werewolf

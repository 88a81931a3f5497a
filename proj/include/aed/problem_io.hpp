// JSON problem files:
//   {"agents": n, "domains": [sizes...],
//    "constraints": [{"i": int, "j": int, "costs": [[int, ...], ...]}]}
// Row index = value index of i, column index = value index of j.

#pragma once

#include <filesystem>
#include <string>

#include "aed/problem.hpp"

namespace aed {

DcopInstance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const DcopInstance& instance);

DcopInstance load_instance(const std::filesystem::path& path);
void save_instance(const DcopInstance& instance, const std::filesystem::path& path);

}  // namespace aed

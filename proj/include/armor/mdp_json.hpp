// Copyright 2026 The ARMOR-Tabular Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "armor/mdp.hpp"

namespace armor {

// MDP documents: {"num_states", "num_actions", "transition": [S][A][S],
// "reward": [S][A], "discount", "initial_dist": [S]}.
nlohmann::json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const nlohmann::json& doc);

// Policy documents: {"probs": [S][A]}.
nlohmann::json policy_to_json(const Policy& pi);
Policy policy_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

Mdp load_mdp(const std::filesystem::path& path);
Policy load_policy(const std::filesystem::path& path);

}  // namespace armor

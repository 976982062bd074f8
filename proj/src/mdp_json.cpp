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

#include "armor/mdp_json.hpp"

#include <fstream>
#include <sstream>

namespace armor {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& doc, Eigen::Index rows, Eigen::Index cols,
                                 const char* field) {
  if (!doc.is_array() || static_cast<Eigen::Index>(doc.size()) != rows)
    throw DimensionError(std::string("json field '") + field + "' has wrong row count");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = doc[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw DimensionError(std::string("json field '") + field + "' has wrong column count");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace

json mdp_to_json(const Mdp& mdp) {
  json transition = json::array();
  for (int s = 0; s < mdp.num_states; ++s) {
    json per_action = json::array();
    for (int a = 0; a < mdp.num_actions; ++a) {
      json row = json::array();
      for (int sp = 0; sp < mdp.num_states; ++sp) row.push_back(mdp.transition(mdp.row(s, a), sp));
      per_action.push_back(std::move(row));
    }
    transition.push_back(std::move(per_action));
  }
  json init = json::array();
  for (int s = 0; s < mdp.num_states; ++s) init.push_back(mdp.initial_dist(s));
  return json{{"num_states", mdp.num_states},
              {"num_actions", mdp.num_actions},
              {"transition", std::move(transition)},
              {"reward", matrix_to_json(mdp.reward)},
              {"discount", mdp.discount},
              {"initial_dist", std::move(init)}};
}

Mdp mdp_from_json(const json& doc) {
  try {
    Mdp mdp;
    mdp.num_states = doc.at("num_states").get<int>();
    mdp.num_actions = doc.at("num_actions").get<int>();
    if (mdp.num_states <= 0 || mdp.num_actions <= 0)
      throw DimensionError("mdp json: counts must be positive");
    const int S = mdp.num_states;
    const int A = mdp.num_actions;
    const json& tr = doc.at("transition");
    if (!tr.is_array() || static_cast<int>(tr.size()) != S)
      throw DimensionError("mdp json: transition must have num_states entries");
    mdp.transition.resize(static_cast<Eigen::Index>(S) * A, S);
    for (int s = 0; s < S; ++s) {
      const Eigen::MatrixXd block = matrix_from_json(tr[static_cast<std::size_t>(s)], A, S, "transition");
      mdp.transition.middleRows(static_cast<Eigen::Index>(s) * A, A) = block;
    }
    mdp.reward = matrix_from_json(doc.at("reward"), S, A, "reward");
    mdp.discount = doc.at("discount").get<double>();
    const json& init = doc.at("initial_dist");
    if (!init.is_array() || static_cast<int>(init.size()) != S)
      throw DimensionError("mdp json: initial_dist must have num_states entries");
    mdp.initial_dist.resize(S);
    for (int s = 0; s < S; ++s) mdp.initial_dist(s) = init[static_cast<std::size_t>(s)].get<double>();
    mdp.validate();
    return mdp;
  } catch (const json::exception& e) {
    throw ParseError(std::string("mdp json: ") + e.what(), 0);
  }
}

json policy_to_json(const Policy& pi) { return json{{"probs", matrix_to_json(pi.probs)}}; }

Policy policy_from_json(const json& doc) {
  try {
    const json& probs = doc.at("probs");
    if (!probs.is_array() || probs.empty() || !probs[0].is_array())
      throw DimensionError("policy json: probs must be a nonempty 2-d array");
    Policy pi{matrix_from_json(probs, static_cast<Eigen::Index>(probs.size()),
                               static_cast<Eigen::Index>(probs[0].size()), "probs")};
    pi.validate();
    return pi;
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy json: ") + e.what(), 0);
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

Mdp load_mdp(const std::filesystem::path& path) { return mdp_from_json(read_json_file(path)); }

Policy load_policy(const std::filesystem::path& path) {
  return policy_from_json(read_json_file(path));
}

}  // namespace armor

// Copyright 2026 The Entropy Lab Authors.
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

#ifndef ENTROPY_LAB_CONFIG_HPP_
#define ENTROPY_LAB_CONFIG_HPP_

// Run configuration, read from JSON. Unknown keys are rejected and every
// error names the JSON path of the offending field. Dataset paths are
// resolved relative to the directory holding the config file.
//
// {
//   "name": "sample",
//   "env": {"kind": "classification", "train_images": "...", ...},
//   "agents": [{"name": "pg", "kind": "pg", "hidden": [], "lr": 0.001}],
//   "total_interactions": 100000, "eval_every": 1000, "eval_size": 1000,
//   "seeds": [0, 1, 2], "output_dir": "out/sample"
// }

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "entropy_lab/agents.hpp"
#include "entropy_lab/envs.hpp"

namespace entropy_lab {

struct ClassificationEnvConfig {
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path eval_images;
  std::filesystem::path eval_labels;
  std::size_t train_size = 5000;  // 0 keeps every training image
  ClassificationReward reward = ClassificationReward::kSigned;
  std::size_t classes = 10;
};

struct GenreEnvConfig {
  std::optional<std::filesystem::path> genre_csv;
  std::optional<std::filesystem::path> track_csv;
  std::size_t genres = 20;
  std::size_t features = 10;
  std::size_t tracks = 50;
  double epsilon = 0.1;
};

struct ClickEnvConfig {
  std::size_t products = 50;
  std::size_t dim = 50;
  double beta = 1.0;
};

struct PreferenceEnvConfig {
  std::size_t actions = 100;
  std::size_t dim = 100;
  double noise = 0.0;
};

using EnvConfig = std::variant<ClassificationEnvConfig, GenreEnvConfig,
                               ClickEnvConfig, PreferenceEnvConfig>;

std::string env_kind(const EnvConfig& env);

struct RunConfig {
  std::string name = "experiment";
  EnvConfig env;
  std::vector<AgentConfig> agents;
  std::size_t total_interactions = 100000;
  std::size_t eval_every = 1000;
  std::size_t eval_size = 1000;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "out";
};

// Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

AgentConfig parse_agent_config(const nlohmann::json& doc, const std::string& path);

// Canonical echo of a config, written next to the run outputs.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const AgentConfig& agent);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_CONFIG_HPP_

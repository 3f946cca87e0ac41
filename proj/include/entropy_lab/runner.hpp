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

#ifndef ENTROPY_LAB_RUNNER_HPP_
#define ENTROPY_LAB_RUNNER_HPP_

// Runs every (agent, seed) pair of a RunConfig and writes
//
//   <out>/run_info.json
//   <out>/<agent>/seed_<s>/metrics.csv            step,value,entropy_state,entropy_marginal
//   <out>/<agent>/seed_<s>/histograms/step_N.csv  step,action,count,sorted_rank
//   <out>/<agent>/seed_<s>/abort.json             only when training diverged
//
// Output bytes depend only on the config and the seed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "entropy_lab/config.hpp"
#include "entropy_lab/envs.hpp"
#include "entropy_lab/idx.hpp"
#include "entropy_lab/metrics.hpp"

namespace entropy_lab {

// Datasets are loaded once and shared by every run.
struct LoadedData {
  std::shared_ptr<const LabeledImageSet> train;
  std::shared_ptr<const LabeledImageSet> eval;
  std::optional<FeatureTable> genres;
  std::optional<FeatureTable> tracks;
};

LoadedData load_data(const EnvConfig& env);

// The environment for one seed; its random construction (synthetic
// features, eval set) comes from the seed's env-init stream.
std::unique_ptr<ContextualBandit> make_env(const EnvConfig& env, const LoadedData& data,
                                           std::size_t eval_size, std::uint64_t seed);

struct RunResult {
  std::string agent;
  std::uint64_t seed = 0;
  std::vector<MetricsRecord> records;
  bool aborted = false;
  std::string abort_reason;
  std::size_t abort_step = 0;
};

// One (agent, seed) training run without touching the filesystem.
RunResult run_single(const RunConfig& config, const AgentConfig& agent,
                     const ContextualBandit& env, std::uint64_t seed,
                     int eval_threads = 1);

std::string metrics_csv(const std::vector<MetricsRecord>& records);
std::string histogram_csv(const MetricsRecord& record);

struct RunnerOptions {
  std::uint64_t seed_offset = 0;
  // 0 reads ENTROPY_LAB_THREADS, falling back to the hardware count.
  std::size_t max_workers = 0;
  bool quiet = false;
};

std::size_t worker_cap_from_env();

// Writes everything under config.output_dir and returns one result per
// (agent, seed) in config order.
std::vector<RunResult> run_experiment(const RunConfig& config,
                                      const RunnerOptions& options = {});

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_RUNNER_HPP_

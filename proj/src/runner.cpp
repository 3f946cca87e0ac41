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

#include "entropy_lab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "entropy_lab/agents.hpp"
#include "entropy_lab/error.hpp"
#include "entropy_lab/rng.hpp"

namespace entropy_lab {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Matrix feature_matrix(const std::optional<FeatureTable>& table, std::size_t rows,
                      std::size_t cols, Rng& rng) {
  if (table) return table->values;
  return random_features(rows, cols, rng);
}

}  // namespace

LoadedData load_data(const EnvConfig& env) {
  LoadedData data;
  if (const auto* c = std::get_if<ClassificationEnvConfig>(&env)) {
    auto train = load_idx_files(c->train_images, c->train_labels);
    if (c->train_size > 0 && c->train_size < train.size()) {
      train.images.resize(c->train_size);
      train.labels.resize(c->train_size);
    }
    data.train = std::make_shared<const LabeledImageSet>(std::move(train));
    data.eval = std::make_shared<const LabeledImageSet>(
        load_idx_files(c->eval_images, c->eval_labels));
  } else if (const auto* g = std::get_if<GenreEnvConfig>(&env)) {
    if (g->genre_csv) data.genres = load_feature_csv(*g->genre_csv);
    if (g->track_csv) data.tracks = load_feature_csv(*g->track_csv);
    if (data.genres && data.tracks &&
        data.genres->values.cols() != data.tracks->values.cols()) {
      throw ConfigError("env.track_csv", "feature count differs from env.genre_csv");
    }
  }
  return data;
}

std::unique_ptr<ContextualBandit> make_env(const EnvConfig& env, const LoadedData& data,
                                           std::size_t eval_size, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::kEnvInit);
  if (const auto* c = std::get_if<ClassificationEnvConfig>(&env)) {
    return std::make_unique<ClassificationBandit>(data.train, data.eval, eval_size,
                                                  c->reward, c->classes);
  }
  if (const auto* g = std::get_if<GenreEnvConfig>(&env)) {
    std::size_t features = data.genres   ? data.genres->values.cols()
                           : data.tracks ? data.tracks->values.cols()
                                         : g->features;
    Matrix genre = feature_matrix(data.genres, g->genres, features, rng);
    Matrix track = feature_matrix(data.tracks, g->tracks, features, rng);
    return std::make_unique<GenreBandit>(GenreModel(genre, track, g->epsilon),
                                         eval_size, rng);
  }
  if (const auto* c = std::get_if<ClickEnvConfig>(&env)) {
    ClickModel model = ClickModel::random(c->products, c->dim, c->beta, rng);
    return std::make_unique<ClickBandit>(std::move(model), eval_size, rng);
  }
  const auto& p = std::get<PreferenceEnvConfig>(env);
  PreferenceModel model = PreferenceModel::random(p.actions, p.dim, p.noise, rng);
  return std::make_unique<PreferenceBandit>(std::move(model), eval_size, rng);
}

RunResult run_single(const RunConfig& config, const AgentConfig& agent_config,
                     const ContextualBandit& env, std::uint64_t seed, int eval_threads) {
  RunResult result;
  result.agent = agent_config.name;
  result.seed = seed;

  Agent agent(agent_config, env.state_dim(), env.action_count(), seed,
              config.total_interactions);
  Rng state_rng = make_stream(seed, Stream::kStateSampling);
  Rng reward_rng = make_stream(seed, Stream::kRewardNoise);
  Rng action_rng = make_stream(seed, Stream::kActionSampling);

  auto checkpoint = [&](std::size_t step) {
    EvalOptions opts;
    opts.seed = seed;
    opts.step = step;
    opts.threads = eval_threads;
    result.records.push_back(evaluate_checkpoint(agent, env, opts));
  };

  checkpoint(0);
  for (std::size_t t = 1; t <= config.total_interactions; ++t) {
    State s = env.sample_state(state_rng);
    std::size_t a = agent.act(s.features, action_rng);
    double r = env.reward(s, a, reward_rng);
    bool trained = agent.observe(Interaction{std::move(s.features), a, r});
    if (trained && !agent.params().all_finite()) {
      result.aborted = true;
      result.abort_step = t;
      result.abort_reason = "non-finite parameters after a training step";
      return result;
    }
    if (t % config.eval_every == 0) checkpoint(t);
  }
  return result;
}

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
  std::string out = "step,value,entropy_state,entropy_marginal\n";
  for (const auto& r : records) {
    out += std::to_string(r.step) + "," + fmt(r.value) + "," + fmt(r.entropy_state) +
           "," + fmt(r.entropy_marginal) + "\n";
  }
  return out;
}

std::string histogram_csv(const MetricsRecord& record) {
  // sorted_rank: position of the action once counts are sorted in
  // nonincreasing order, ties broken by action index.
  const std::size_t k = record.histogram.size();
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return record.histogram[x] > record.histogram[y];
  });
  std::vector<std::size_t> rank(k);
  for (std::size_t i = 0; i < k; ++i) rank[order[i]] = i;
  std::string out = "step,action,count,sorted_rank\n";
  for (std::size_t a = 0; a < k; ++a) {
    out += std::to_string(record.step) + "," + std::to_string(a) + "," +
           std::to_string(record.histogram[a]) + "," + std::to_string(rank[a]) + "\n";
  }
  return out;
}

std::size_t worker_cap_from_env() {
  if (const char* v = std::getenv("ENTROPY_LAB_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n >= 1) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void write_run(const fs::path& dir, const RunResult& result) {
  fs::create_directories(dir / "histograms");
  write_text(dir / "metrics.csv", metrics_csv(result.records));
  for (const auto& r : result.records) {
    char name[64];
    std::snprintf(name, sizeof(name), "step_%08zu.csv", r.step);
    write_text(dir / "histograms" / name, histogram_csv(r));
  }
  fs::path abort_path = dir / "abort.json";
  if (result.aborted) {
    nlohmann::json j = {{"agent", result.agent},
                        {"seed", result.seed},
                        {"step", result.abort_step},
                        {"reason", result.abort_reason}};
    write_text(abort_path, j.dump(2) + "\n");
  } else {
    fs::remove(abort_path);
  }
}

}  // namespace

std::vector<RunResult> run_experiment(const RunConfig& config,
                                      const RunnerOptions& options) {
  LoadedData data = load_data(config.env);

  std::vector<std::uint64_t> seeds;
  for (auto s : config.seeds) seeds.push_back(s + options.seed_offset);

  fs::create_directories(config.output_dir);
  nlohmann::json info = to_json(config);
  info["seeds"] = seeds;
  info["scale"] =
      "desk scale: subsets and interaction budgets are chosen for a laptop and "
      "are smaller than the original experiments";
  write_text(config.output_dir / "run_info.json", info.dump(2) + "\n");

  struct Job {
    std::size_t agent;
    std::size_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < config.agents.size(); ++a) {
    for (std::size_t s = 0; s < seeds.size(); ++s) jobs.push_back({a, s});
  }

  std::size_t cap = options.max_workers ? options.max_workers : worker_cap_from_env();
  std::size_t workers = std::min(cap, jobs.size());
  int eval_threads = static_cast<int>(std::max<std::size_t>(1, cap / workers));

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto& agent = config.agents[jobs[j].agent];
        std::uint64_t seed = seeds[jobs[j].seed];
        // Each run builds its own environment; only the datasets are shared.
        auto env = make_env(config.env, data, config.eval_size, seed);
        results[j] = run_single(config, agent, *env, seed, eval_threads);
        write_run(config.output_dir / agent.name / ("seed_" + std::to_string(seed)),
                  results[j]);
        if (!options.quiet) {
          std::lock_guard<std::mutex> lock(log_mutex);
          const auto& last = results[j].records.back();
          std::cerr << agent.name << " seed " << seed << ": "
                    << (results[j].aborted ? "aborted at step " +
                                                 std::to_string(results[j].abort_step)
                                           : "done")
                    << ", value " << fmt(last.value) << ", entropy_state "
                    << fmt(last.entropy_state) << "\n";
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(log_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace entropy_lab

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

#include "entropy_lab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "entropy_lab/error.hpp"
#include "entropy_lab/kernels.hpp"

namespace entropy_lab {

namespace {

double row_entropy(const Matrix& table, Eigen::Index i) {
  double h = 0.0;
  for (Eigen::Index a = 0; a < table.cols(); ++a) {
    double p = table(i, a);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double value_from_actions(const ContextualBandit& env, std::span<const State> states,
                          std::span<const std::size_t> actions,
                          const EvalOptions& options) {
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Rng rng = kernels::item_stream(options.seed, options.step, i,
                                   kernels::kPurposeReward);
    total += env.reward(states[i], actions[i], rng);
  }
  return total / static_cast<double>(states.size());
}

}  // namespace

Matrix policy_table(const Agent& agent, std::span<const State> states,
                    int threads) {
  auto dist = [&](std::size_t i) { return agent.action_distribution(states[i].features); };
  if (threads <= 1) {
    return kernels::serial::policy_table(dist, states.size(), agent.action_count());
  }
  return kernels::omp::policy_table(dist, states.size(), agent.action_count(), threads);
}

ValueEstimate policy_value(const Matrix& table, const ContextualBandit& env,
                           std::span<const State> states,
                           const EvalOptions& options) {
  if (states.empty()) throw InvalidInput("evaluation set is empty");
  if (static_cast<std::size_t>(table.rows()) != states.size() ||
      static_cast<std::size_t>(table.cols()) != env.action_count()) {
    throw InvalidInput("policy table does not match the evaluation set");
  }
  if (env.deterministic_rewards()) {
    Rng unused = make_stream(options.seed, Stream::kEvaluation);
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (Eigen::Index a = 0; a < table.cols(); ++a) {
        double p = table(static_cast<Eigen::Index>(i), a);
        if (p == 0.0) continue;
        total += p * env.reward(states[i], static_cast<std::size_t>(a), unused);
      }
    }
    return {total / static_cast<double>(states.size()), ValueMode::kExpected};
  }
  auto actions = sample_actions(table, options);
  return {value_from_actions(env, states, actions, options), ValueMode::kSampled};
}

double policy_entropy_state(const Matrix& table) {
  if (table.rows() == 0) throw InvalidInput("evaluation set is empty");
  double total = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) total += row_entropy(table, i);
  return total / static_cast<double>(table.rows());
}

std::vector<std::size_t> sample_actions(const Matrix& table,
                                        const EvalOptions& options) {
  if (options.threads <= 1) {
    return kernels::serial::sample_actions(table, options.seed, options.step);
  }
  return kernels::omp::sample_actions(table, options.seed, options.step,
                                      options.threads);
}

std::vector<std::size_t> count_actions(std::span<const std::size_t> actions,
                                       std::size_t k) {
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t a : actions) {
    if (a >= k) throw InvalidInput("sampled action out of range");
    ++counts[a];
  }
  return counts;
}

std::vector<std::size_t> sorted_counts(std::vector<std::size_t> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return counts;
}

std::vector<std::size_t> action_histogram(const Matrix& table,
                                          const EvalOptions& options, bool sorted) {
  auto counts = count_actions(sample_actions(table, options),
                              static_cast<std::size_t>(table.cols()));
  return sorted ? sorted_counts(std::move(counts)) : counts;
}

double histogram_entropy(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

double policy_entropy_marginal(const Matrix& table, const EvalOptions& options) {
  auto counts = action_histogram(table, options, false);
  return histogram_entropy(counts);
}

MetricsRecord evaluate_checkpoint(const Agent& agent, const ContextualBandit& env,
                                  const EvalOptions& options) {
  std::span<const State> states(env.eval_set());
  Matrix table = policy_table(agent, states, options.threads);
  auto actions = sample_actions(table, options);

  MetricsRecord rec;
  rec.step = options.step;
  if (env.deterministic_rewards()) {
    ValueEstimate v = policy_value(table, env, states, options);
    rec.value = v.value;
    rec.value_mode = v.mode;
  } else {
    rec.value = value_from_actions(env, states, actions, options);
    rec.value_mode = ValueMode::kSampled;
  }
  rec.entropy_state = policy_entropy_state(table);
  rec.histogram = count_actions(actions, env.action_count());
  rec.entropy_marginal = histogram_entropy(rec.histogram);
  return rec;
}

}  // namespace entropy_lab

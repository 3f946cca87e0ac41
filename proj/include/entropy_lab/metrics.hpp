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

#ifndef ENTROPY_LAB_METRICS_HPP_
#define ENTROPY_LAB_METRICS_HPP_

// Policy value, policy entropy and action-selection histograms over a fixed
// evaluation set.
//
// A policy is represented by its table: row i is pi(.|s_i) for eval state i.
// Random draws at a checkpoint come from per-state substreams keyed by
// (seed, step, i), so serial and threaded evaluation agree exactly and
// re-evaluating a checkpoint reproduces the same histogram.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "entropy_lab/agents.hpp"
#include "entropy_lab/envs.hpp"
#include "entropy_lab/numerics.hpp"

namespace entropy_lab {

enum class ValueMode {
  kExpected,  // mean over states of sum_a pi(a|s) r(s, a)
  kSampled,   // mean over states of r(s, a ~ pi(s))
};

struct ValueEstimate {
  double value = 0.0;
  ValueMode mode = ValueMode::kExpected;
};

struct MetricsRecord {
  std::size_t step = 0;
  double value = 0.0;
  ValueMode value_mode = ValueMode::kExpected;
  double entropy_state = 0.0;
  double entropy_marginal = 0.0;
  std::vector<std::size_t> histogram;  // unsorted, one count per action
};

// Evaluation threads; 1 selects the serial reference kernels.
struct EvalOptions {
  std::uint64_t seed = 0;
  std::size_t step = 0;
  int threads = 1;
};

Matrix policy_table(const Agent& agent, std::span<const State> states,
                    int threads = 1);

// Exact expectation when the environment's rewards are deterministic,
// otherwise a one-sample-per-state Monte Carlo estimate.
ValueEstimate policy_value(const Matrix& table, const ContextualBandit& env,
                           std::span<const State> states,
                           const EvalOptions& options);

// Mean per-state Shannon entropy in nats, with 0 log 0 = 0.
double policy_entropy_state(const Matrix& table);

// One sampled action per state.
std::vector<std::size_t> sample_actions(const Matrix& table,
                                        const EvalOptions& options);

// Counts per action; with `sorted` the counts are returned in nonincreasing
// order and action identity is dropped.
std::vector<std::size_t> action_histogram(const Matrix& table,
                                          const EvalOptions& options, bool sorted);
std::vector<std::size_t> count_actions(std::span<const std::size_t> actions,
                                       std::size_t k);
std::vector<std::size_t> sorted_counts(std::vector<std::size_t> counts);

// Entropy of the normalized histogram, in nats.
double histogram_entropy(std::span<const std::size_t> counts);

// Entropy of the aggregate action distribution, estimated from the sampled
// histogram.
double policy_entropy_marginal(const Matrix& table, const EvalOptions& options);

// Everything recorded at a checkpoint, sharing one set of sampled actions
// between the histogram, the marginal entropy and (when sampled) the value.
MetricsRecord evaluate_checkpoint(const Agent& agent, const ContextualBandit& env,
                                  const EvalOptions& options);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_METRICS_HPP_

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

#ifndef ENTROPY_LAB_AGENTS_HPP_
#define ENTROPY_LAB_AGENTS_HPP_

// Policy-optimization (pg, a2c, ppo) and Q-learning (ql, dqn) agents for
// contextual bandits. Every agent is a single network trained by plain SGD,
// theta' = theta - (lr / N) * sum_n grad L(s_n, a_n, r_n).
//
// Network heads: pg has K logits, ql and dqn have K Q-values, a2c and ppo
// share one trunk between K logits and a trailing value output v(s).

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entropy_lab/numerics.hpp"
#include "entropy_lab/rng.hpp"

namespace entropy_lab {

enum class AgentKind { kPg, kQl, kA2c, kDqn, kPpo };

std::string to_string(AgentKind kind);
AgentKind agent_kind_from_string(const std::string& name);

// Policy-optimization agents sample from softmax(logits); Q-learning agents
// act epsilon-greedily on their outputs.
bool is_policy_optimizer(AgentKind kind);
bool has_value_head(AgentKind kind);

enum class InitScheme { kUniform, kZeros };

// Linear decay from `start` to `end` over the first `fraction` of the run,
// constant afterwards.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double fraction = 0.1;

  double at(std::size_t step, std::size_t total_steps) const;
};

struct AgentConfig {
  std::string name;
  AgentKind kind = AgentKind::kPg;
  std::vector<std::size_t> hidden;
  std::optional<Activation> activation;  // tanh for pg/a2c/ppo, relu for ql/dqn
  bool bias = true;
  InitScheme init = InitScheme::kUniform;
  double lr = 1e-3;
  std::size_t batch_size = 32;
  double ppo_clip = 0.2;
  std::size_t ppo_epochs = 10;
  EpsilonSchedule dqn_epsilon;
  std::size_t dqn_buffer_capacity = 50000;
  double ql_epsilon = 0.1;
  bool normalize_advantage = false;

  Activation resolved_activation() const;
  MlpSpec net_spec(std::size_t state_dim, std::size_t action_count) const;
  void validate() const;
};

struct Interaction {
  Vector state;
  std::size_t action = 0;
  double reward = 0.0;
};

// --- loss gradients ---------------------------------------------------------
// Each returns dL/dtheta as an M-vector. `k` is the action count.

// -r * [1(a=k) - pi(k|s)] x dZ(s)
Vector pg_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                    double r);

// 2 (z_a(s) - r) dz_a(s)
Vector ql_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                    double r);

// -2 (r - z_a(s)) dz_a(s); the bandit target is exactly r.
Vector dqn_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                     double r);

// -(r - v(s)) (dv(s) + [1(a=k) - pi(k|s)] x dZ(s)), from
// L = -adv * log pi(a|s) + 1/2 (r - v(s))^2 with adv held fixed.
Vector a2c_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                     double r);

// Clipped-surrogate gradient. The advantage r - v(s) is taken from the
// snapshot network; the ratio pi(a|s) / pi_snapshot(a|s) selects the branch:
// inside |1 - ratio| < clip the policy term is
// -adv * ratio * [1(a=k) - pi(k|s)] x dZ(s), outside it is zero. The value
// term -(r - v(s)) dv(s) uses the current network and is always present.
Vector ppo_loss_grad(const NetworkParams& params, const NetworkParams& snapshot,
                     const Vector& s, std::size_t a, double r, double clip);

// Same as the above with an explicit advantage (used when advantages are
// normalized over a batch).
Vector a2c_loss_grad_with_advantage(const NetworkParams& params, const Vector& s,
                                    std::size_t a, double r, double advantage);
Vector ppo_loss_grad_with_advantage(const NetworkParams& params,
                                    const NetworkParams& snapshot, const Vector& s,
                                    std::size_t a, double r, double advantage,
                                    double clip);

// Mean loss gradient over a batch for the given agent kind. For ppo,
// `snapshot` must be set; for a2c/ppo advantages are optionally
// standardized across the batch.
Vector batch_loss_grad(AgentKind kind, const NetworkParams& params,
                       const NetworkParams* snapshot,
                       std::span<const Interaction> batch, double clip = 0.2,
                       bool normalize_advantage = false);

// One SGD step on the batch mean gradient: theta - lr * batch_loss_grad.
NetworkParams gradient_step(AgentKind kind, const NetworkParams& params,
                            const NetworkParams* snapshot,
                            std::span<const Interaction> batch, double lr,
                            double clip = 0.2, bool normalize_advantage = false);

// Index of the maximum; ties broken uniformly at random from `rng`.
std::size_t argmax_random_tie(const Vector& values, Rng& rng);

// Epsilon-greedy distribution: epsilon spread uniformly, the remaining mass
// split equally among the maximizers.
Vector epsilon_greedy_distribution(const Vector& q, double epsilon);

class Agent {
 public:
  // `seed` keys the agent-init and replay streams. `total_interactions`
  // sets the horizon of the dqn epsilon schedule.
  Agent(AgentConfig config, std::size_t state_dim, std::size_t action_count,
        std::uint64_t seed, std::size_t total_interactions);

  const AgentConfig& config() const { return config_; }
  AgentKind kind() const { return config_.kind; }
  std::size_t action_count() const { return action_count_; }
  const NetworkParams& params() const { return params_; }
  void set_params(NetworkParams params);

  // Interactions seen so far.
  std::size_t steps() const { return steps_; }
  // Exploration rate in effect now (0 for policy-optimization agents).
  double epsilon() const;

  // The distribution the agent currently samples actions from.
  Vector action_distribution(const Vector& s) const;
  std::size_t act(const Vector& s, Rng& rng) const;

  // Records an interaction; trains once batch_size interactions are pending.
  // Returns true when a training step ran.
  bool observe(Interaction interaction);

  // One training round on `batch`. pg/ql/a2c: one step on the batch. ppo:
  // snapshot, then ppo_epochs steps on the same batch. dqn: insert into the
  // replay buffer, then one step on batch.size() uniform draws from it.
  void train_step(std::span<const Interaction> batch);

  const std::deque<Interaction>& replay_buffer() const { return buffer_; }
  const std::optional<NetworkParams>& snapshot() const { return snapshot_; }

 private:
  AgentConfig config_;
  std::size_t action_count_;
  std::size_t total_interactions_;
  NetworkParams params_;
  std::optional<NetworkParams> snapshot_;
  std::deque<Interaction> buffer_;
  std::vector<Interaction> pending_;
  Rng replay_rng_;
  std::size_t steps_ = 0;
};

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_AGENTS_HPP_

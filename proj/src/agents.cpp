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

#include "entropy_lab/agents.hpp"

#include <cmath>

#include "entropy_lab/error.hpp"
#include "entropy_lab/kernels.hpp"

namespace entropy_lab {

namespace {

void check_action(std::size_t a, std::size_t k) {
  if (a >= k) {
    throw InvalidInput("action " + std::to_string(a) + " out of range [0, " +
                       std::to_string(k) + ")");
  }
}

// [1(a=k) - pi(k|s)] over the first k outputs.
Vector score_coefficients(const Vector& pi, std::size_t a) {
  Vector coef = -pi;
  coef[static_cast<Eigen::Index>(a)] += 1.0;
  return coef;
}

Vector q_regression_grad(const NetworkParams& params, const Vector& s,
                         std::size_t a, double r) {
  check_action(a, params.spec.output_dim);
  Vector z = forward(params, s);
  Vector g = Vector::Zero(z.size());
  g[static_cast<Eigen::Index>(a)] = 2.0 * (z[static_cast<Eigen::Index>(a)] - r);
  return backprop(params, s, g);
}

void require_value_head(const NetworkParams& params) {
  if (params.spec.output_dim < 2) {
    throw InvalidInput("actor-critic network needs K logits plus a value output");
  }
}

}  // namespace

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kPg:
      return "pg";
    case AgentKind::kQl:
      return "ql";
    case AgentKind::kA2c:
      return "a2c";
    case AgentKind::kDqn:
      return "dqn";
    case AgentKind::kPpo:
      return "ppo";
  }
  return "?";
}

AgentKind agent_kind_from_string(const std::string& name) {
  if (name == "pg") return AgentKind::kPg;
  if (name == "ql") return AgentKind::kQl;
  if (name == "a2c") return AgentKind::kA2c;
  if (name == "dqn") return AgentKind::kDqn;
  if (name == "ppo") return AgentKind::kPpo;
  throw InvalidInput("unknown agent kind '" + name + "'");
}

bool is_policy_optimizer(AgentKind kind) {
  return kind == AgentKind::kPg || kind == AgentKind::kA2c || kind == AgentKind::kPpo;
}

bool has_value_head(AgentKind kind) {
  return kind == AgentKind::kA2c || kind == AgentKind::kPpo;
}

double EpsilonSchedule::at(std::size_t step, std::size_t total_steps) const {
  double horizon = fraction * static_cast<double>(total_steps);
  if (horizon <= 0.0 || static_cast<double>(step) >= horizon) return end;
  double t = static_cast<double>(step) / horizon;
  return start + (end - start) * t;
}

Activation AgentConfig::resolved_activation() const {
  if (activation) return *activation;
  return is_policy_optimizer(kind) ? Activation::kTanh : Activation::kRelu;
}

MlpSpec AgentConfig::net_spec(std::size_t state_dim, std::size_t action_count) const {
  MlpSpec spec;
  spec.input_dim = state_dim;
  spec.hidden = hidden;
  spec.output_dim = action_count + (has_value_head(kind) ? 1 : 0);
  spec.activation = resolved_activation();
  spec.bias = bias;
  return spec;
}

void AgentConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw InvalidInput("lr must be > 0");
  if (batch_size == 0) throw InvalidInput("batch_size must be >= 1");
  if (!(ppo_clip > 0.0 && ppo_clip < 1.0)) {
    throw InvalidInput("ppo_clip must lie in (0, 1)");
  }
  if (ppo_epochs == 0) throw InvalidInput("ppo_epochs must be >= 1");
  auto unit = [](double e) { return e >= 0.0 && e <= 1.0; };
  if (!unit(ql_epsilon) || !unit(dqn_epsilon.start) || !unit(dqn_epsilon.end)) {
    throw InvalidInput("epsilon values must lie in [0, 1]");
  }
  if (!unit(dqn_epsilon.fraction)) {
    throw InvalidInput("epsilon decay fraction must lie in [0, 1]");
  }
  if (dqn_buffer_capacity == 0) throw InvalidInput("dqn_buffer_capacity must be >= 1");
  for (std::size_t h : hidden) {
    if (h == 0) throw InvalidInput("hidden layer sizes must be >= 1");
  }
}

// --- loss gradients ---------------------------------------------------------

Vector pg_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                    double r) {
  check_action(a, params.spec.output_dim);
  Vector pi = softmax(forward(params, s));
  return backprop(params, s, -r * score_coefficients(pi, a));
}

Vector ql_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                    double r) {
  return q_regression_grad(params, s, a, r);
}

Vector dqn_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                     double r) {
  return q_regression_grad(params, s, a, r);
}

Vector a2c_loss_grad_with_advantage(const NetworkParams& params, const Vector& s,
                                    std::size_t a, double r, double advantage) {
  require_value_head(params);
  const auto k = static_cast<Eigen::Index>(params.spec.output_dim - 1);
  check_action(a, static_cast<std::size_t>(k));
  Vector out = forward(params, s);
  Vector pi = softmax(out.head(k));
  Vector g(out.size());
  g.head(k) = -advantage * score_coefficients(pi, a);
  g[k] = -(r - out[k]);
  return backprop(params, s, g);
}

Vector a2c_loss_grad(const NetworkParams& params, const Vector& s, std::size_t a,
                     double r) {
  require_value_head(params);
  double v = forward(params, s)[static_cast<Eigen::Index>(params.spec.output_dim - 1)];
  return a2c_loss_grad_with_advantage(params, s, a, r, r - v);
}

Vector ppo_loss_grad_with_advantage(const NetworkParams& params,
                                    const NetworkParams& snapshot, const Vector& s,
                                    std::size_t a, double r, double advantage,
                                    double clip) {
  require_value_head(params);
  if (!(params.spec == snapshot.spec)) {
    throw InvalidInput("snapshot network has a different architecture");
  }
  const auto k = static_cast<Eigen::Index>(params.spec.output_dim - 1);
  check_action(a, static_cast<std::size_t>(k));
  const auto ai = static_cast<Eigen::Index>(a);
  Vector out = forward(params, s);
  Vector pi = softmax(out.head(k));
  Vector pi_old = softmax(forward(snapshot, s).head(k));
  double ratio = pi[ai] / pi_old[ai];
  Vector g = Vector::Zero(out.size());
  if (std::abs(1.0 - ratio) < clip) {
    g.head(k) = -advantage * ratio * score_coefficients(pi, a);
  }
  g[k] = -(r - out[k]);
  return backprop(params, s, g);
}

Vector ppo_loss_grad(const NetworkParams& params, const NetworkParams& snapshot,
                     const Vector& s, std::size_t a, double r, double clip) {
  require_value_head(snapshot);
  double v_old = forward(snapshot, s)[static_cast<Eigen::Index>(snapshot.spec.output_dim - 1)];
  return ppo_loss_grad_with_advantage(params, snapshot, s, a, r, r - v_old, clip);
}

Vector batch_loss_grad(AgentKind kind, const NetworkParams& params,
                       const NetworkParams* snapshot,
                       std::span<const Interaction> batch, double clip,
                       bool normalize_advantage) {
  if (batch.empty()) throw InvalidInput("training batch is empty");
  const std::size_t n = batch.size();
  const std::size_t m = static_cast<std::size_t>(params.theta.size());

  std::vector<double> advantages;
  if (has_value_head(kind)) {
    if (kind == AgentKind::kPpo && snapshot == nullptr) {
      throw InvalidInput("ppo update needs a policy snapshot");
    }
    const NetworkParams& critic = kind == AgentKind::kPpo ? *snapshot : params;
    const auto vi = static_cast<Eigen::Index>(critic.spec.output_dim - 1);
    advantages.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      advantages[i] = batch[i].reward - forward(critic, batch[i].state)[vi];
    }
    if (normalize_advantage && n > 1) {
      double mean = 0.0;
      for (double x : advantages) mean += x;
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (double x : advantages) var += (x - mean) * (x - mean);
      double sd = std::sqrt(var / static_cast<double>(n));
      for (double& x : advantages) x = (x - mean) / (sd + 1e-8);
    }
  }

  auto grad = [&](std::size_t i) -> Vector {
    const Interaction& it = batch[i];
    switch (kind) {
      case AgentKind::kPg:
        return pg_loss_grad(params, it.state, it.action, it.reward);
      case AgentKind::kQl:
        return ql_loss_grad(params, it.state, it.action, it.reward);
      case AgentKind::kDqn:
        return dqn_loss_grad(params, it.state, it.action, it.reward);
      case AgentKind::kA2c:
        return a2c_loss_grad_with_advantage(params, it.state, it.action, it.reward,
                                            advantages[i]);
      case AgentKind::kPpo:
        return ppo_loss_grad_with_advantage(params, *snapshot, it.state, it.action,
                                            it.reward, advantages[i], clip);
    }
    return Vector();
  };
  Vector sum = kernels::serial::gradient_sum(grad, n, m);
  return sum / static_cast<double>(n);
}

NetworkParams gradient_step(AgentKind kind, const NetworkParams& params,
                            const NetworkParams* snapshot,
                            std::span<const Interaction> batch, double lr,
                            double clip, bool normalize_advantage) {
  return sgd_step(params,
                  batch_loss_grad(kind, params, snapshot, batch, clip,
                                  normalize_advantage),
                  lr);
}

std::size_t argmax_random_tie(const Vector& values, Rng& rng) {
  if (values.size() == 0) throw InvalidInput("argmax of an empty vector");
  double best = values.maxCoeff();
  std::vector<std::size_t> ties;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] == best) ties.push_back(static_cast<std::size_t>(i));
  }
  if (ties.size() == 1) return ties.front();
  return ties[uniform_index(rng, ties.size())];
}

Vector epsilon_greedy_distribution(const Vector& q, double epsilon) {
  if (q.size() == 0) throw InvalidInput("empty Q vector");
  const auto k = static_cast<double>(q.size());
  double best = q.maxCoeff();
  double ties = static_cast<double>((q.array() == best).count());
  Vector dist = Vector::Constant(q.size(), epsilon / k);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q[i] == best) dist[i] += (1.0 - epsilon) / ties;
  }
  return dist;
}

// --- agent ------------------------------------------------------------------

Agent::Agent(AgentConfig config, std::size_t state_dim, std::size_t action_count,
             std::uint64_t seed, std::size_t total_interactions)
    : config_(std::move(config)),
      action_count_(action_count),
      total_interactions_(total_interactions),
      replay_rng_(make_stream(seed, Stream::kReplay)) {
  config_.validate();
  if (action_count_ == 0) throw InvalidInput("agent needs at least one action");
  MlpSpec spec = config_.net_spec(state_dim, action_count);
  if (config_.init == InitScheme::kZeros) {
    params_ = NetworkParams::zeros(spec);
  } else {
    Rng init = make_stream(seed, Stream::kAgentInit);
    params_ = NetworkParams::uniform_init(spec, init);
  }
}

void Agent::set_params(NetworkParams params) {
  if (!(params.spec == params_.spec)) {
    throw InvalidInput("replacement parameters have a different architecture");
  }
  params_ = std::move(params);
}

double Agent::epsilon() const {
  switch (config_.kind) {
    case AgentKind::kQl:
      return config_.ql_epsilon;
    case AgentKind::kDqn:
      return config_.dqn_epsilon.at(steps_, total_interactions_);
    default:
      return 0.0;
  }
}

Vector Agent::action_distribution(const Vector& s) const {
  Vector out = forward(params_, s);
  const auto k = static_cast<Eigen::Index>(action_count_);
  if (is_policy_optimizer(config_.kind)) return softmax(out.head(k));
  return epsilon_greedy_distribution(out.head(k), epsilon());
}

std::size_t Agent::act(const Vector& s, Rng& rng) const {
  Vector out = forward(params_, s);
  const auto k = static_cast<Eigen::Index>(action_count_);
  if (is_policy_optimizer(config_.kind)) {
    Vector pi = softmax(out.head(k));
    return kernels::sample_index(pi.data(), action_count_, uniform01(rng));
  }
  double eps = epsilon();
  if (eps > 0.0 && uniform01(rng) < eps) return uniform_index(rng, action_count_);
  return argmax_random_tie(out.head(k), rng);
}

bool Agent::observe(Interaction interaction) {
  ++steps_;
  pending_.push_back(std::move(interaction));
  if (pending_.size() < config_.batch_size) return false;
  train_step(pending_);
  pending_.clear();
  return true;
}

void Agent::train_step(std::span<const Interaction> batch) {
  if (batch.empty()) throw InvalidInput("training batch is empty");
  switch (config_.kind) {
    case AgentKind::kPg:
    case AgentKind::kQl:
    case AgentKind::kA2c:
      params_ = gradient_step(config_.kind, params_, nullptr, batch, config_.lr,
                              config_.ppo_clip, config_.normalize_advantage);
      return;
    case AgentKind::kPpo: {
      snapshot_ = params_;
      for (std::size_t e = 0; e < config_.ppo_epochs; ++e) {
        params_ = gradient_step(config_.kind, params_, &*snapshot_, batch,
                                config_.lr, config_.ppo_clip,
                                config_.normalize_advantage);
      }
      return;
    }
    case AgentKind::kDqn: {
      for (const Interaction& it : batch) {
        if (buffer_.size() == config_.dqn_buffer_capacity) buffer_.pop_front();
        buffer_.push_back(it);
      }
      std::vector<Interaction> sample;
      sample.reserve(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        sample.push_back(buffer_[uniform_index(replay_rng_, buffer_.size())]);
      }
      params_ = gradient_step(config_.kind, params_, nullptr, sample, config_.lr);
      return;
    }
  }
}

}  // namespace entropy_lab

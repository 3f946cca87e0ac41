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

#ifndef ENTROPY_LAB_THEORY_HPP_
#define ENTROPY_LAB_THEORY_HPP_

// Predicted network-output changes under one SGD step, checked against the
// outputs after an actual step.
//
// Linear networks (pg, ql): Z(x; W') = Z(x; W) + (lr/N) sum_n Omega_n x,
// with Omega_n a K x d matrix. Exact, since Z is linear in W.
//
// General networks (a2c, dqn, ppo): Z(x; T') = Z(x; T) + dZ(x; T) (lr/N)
// sum_n Omega_n + O(|T' - T|^2), with Omega_n an M-vector equal to -dL_n.
// The quadratic remainder is checked by halving the step: the residual
// should shrink about four-fold.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "entropy_lab/agents.hpp"
#include "entropy_lab/numerics.hpp"

namespace entropy_lab {

struct VerificationReport {
  std::string suite;  // "lemma1", "thm1" or "thm2"
  std::string agent;
  double lambda = 0.0;
  double residual = 0.0;       // max-abs over probes and outputs
  double residual_half = 0.0;  // same at lambda / 2 (thm2 only)
  double ratio = 0.0;          // residual / residual_half, NaN if undefined
  double predicted_norm = 0.0;  // max-abs of the predicted change
  double relative_error = 0.0;  // lemma1 only
  bool pass = false;
  std::string note;
  Matrix predicted_delta;  // probes x K
  Matrix actual_delta;
};

nlohmann::json to_json(const VerificationReport& report);

struct VerifyOptions {
  // Fault injection: negate Omega before predicting. Every check should
  // then fail.
  bool flip_omega_sign = false;
  double linear_tolerance = 1e-10;
  double ratio_low = 3.5;
  double ratio_high = 4.5;
  // The quadratic-ratio test only applies once residual(lambda) is below
  // this fraction of the predicted change.
  double asymptotic_fraction = 0.1;
  double lemma1_tolerance = 1e-6;
  double fd_step = 1e-5;
};

// K x d. pg: r [(1(a=k) - pi(k|s)) s]_k. ql: 2 (r - z_a(s)) times the
// matrix with s in row a and zeros elsewhere. Requires a biasless network
// without hidden layers.
Matrix omega_theorem1(AgentKind kind, const NetworkParams& params,
                      const Vector& s, std::size_t a, double r);

VerificationReport verify_theorem1(AgentKind kind, const NetworkParams& params,
                                   std::span<const Interaction> batch,
                                   double lambda, std::span<const Vector> probes,
                                   const VerifyOptions& options = {});

// M-vector Omega for a2c, dqn or ppo, built from the full output Jacobian.
// For ppo the branch is chosen by |1 - pi(a|s)/pi_snapshot(a|s)| < clip.
Vector omega_theorem2(AgentKind kind, const NetworkParams& params,
                      const NetworkParams* snapshot, const Vector& s,
                      std::size_t a, double r, double clip = 0.2);

// One real update (a single epoch for ppo, with the snapshot equal to the
// current parameters) at lambda and at lambda/2, compared with the
// first-order prediction on the first K outputs.
VerificationReport verify_theorem2(AgentKind kind, const NetworkParams& params,
                                   std::span<const Interaction> batch,
                                   double lambda, std::span<const Vector> probes,
                                   double clip = 0.2,
                                   const VerifyOptions& options = {});

// policy_gradient against central differences of pi(a|s); passes when the
// relative 2-norm error is within options.lemma1_tolerance.
VerificationReport verify_lemma1(const NetworkParams& params, const Vector& s,
                                 std::size_t a, std::size_t action_count = 0,
                                 const VerifyOptions& options = {});

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_THEORY_HPP_

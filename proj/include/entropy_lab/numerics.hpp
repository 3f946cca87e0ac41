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

#ifndef ENTROPY_LAB_NUMERICS_HPP_
#define ENTROPY_LAB_NUMERICS_HPP_

// Dense feed-forward networks with hand-written backpropagation.
//
// Parameter layout: layers in order; within a layer the weight matrix
// (out x in) row-major, followed by the bias vector when the spec has
// biases. For a biasless linear network theta is therefore exactly W
// flattened row by row, so output row k owns theta[k*d, (k+1)*d).

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entropy_lab/rng.hpp"

namespace entropy_lab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;

enum class Activation { kTanh, kRelu, kIdentity };

std::string to_string(Activation activation);
Activation activation_from_string(const std::string& name);

struct MlpSpec {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden;
  std::size_t output_dim = 1;
  Activation activation = Activation::kTanh;
  bool bias = true;

  std::size_t param_count() const;
  std::size_t layer_count() const { return hidden.size() + 1; }
  // Outputs are linear functions of the parameters (no hidden layers).
  bool linear_in_params() const { return hidden.empty(); }
  void validate() const;

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

struct NetworkParams {
  MlpSpec spec;
  Vector theta;

  NetworkParams() = default;
  NetworkParams(MlpSpec s, Vector t);

  // All weights zero.
  static NetworkParams zeros(const MlpSpec& spec);
  // Every layer uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases too.
  static NetworkParams uniform_init(const MlpSpec& spec, Rng& rng);

  bool all_finite() const;
};

// Layer l's weights viewed as a (out x in) matrix over the flat vector.
Eigen::Map<const Matrix> layer_weights(const NetworkParams& params,
                                       std::size_t layer);

Vector forward(const NetworkParams& params, const Vector& s);

// K x M matrix; row k is dz_k/dtheta at s.
Matrix output_jacobian(const NetworkParams& params, const Vector& s);

// Vector-Jacobian product: returns output_grad^T * dZ/dtheta without
// materializing the Jacobian. This is what the training losses use.
Vector backprop(const NetworkParams& params, const Vector& s,
                const Vector& output_grad);

// Numerically stable softmax; rejects non-finite input.
Vector softmax(const Vector& z);

// Gradient of pi(a|s) in theta, where pi = softmax over the first
// `action_count` outputs (all outputs when action_count == 0).
Vector policy_gradient(const NetworkParams& params, const Vector& s,
                       std::size_t a, std::size_t action_count = 0);

// theta' = theta - lr * grad. Returns a new parameter set.
NetworkParams sgd_step(const NetworkParams& params, const Vector& grad,
                       double lr);

// Central differences (f(theta + h e_i) - f(theta - h e_i)) / 2h.
// Serial reference; kernels::omp::fd_jacobian is the threaded variant.
Matrix finite_difference_jacobian(const NetworkParams& params,
                                  const Vector& s, double h);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_NUMERICS_HPP_

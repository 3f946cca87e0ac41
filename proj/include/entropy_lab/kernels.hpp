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

#ifndef ENTROPY_LAB_KERNELS_HPP_
#define ENTROPY_LAB_KERNELS_HPP_

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp. The two produce
// bitwise-identical results: work items are independent, per-item random
// draws come from substreams keyed by the item index, and reductions are
// carried out serially in index order.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "entropy_lab/numerics.hpp"
#include "entropy_lab/rng.hpp"

namespace entropy_lab::kernels {

// Inverse-CDF draw from a probability row. Only actions with positive mass
// can be returned.
inline std::size_t sample_index(const double* probs, std::size_t k, double u) {
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < k; ++a) {
    if (probs[a] <= 0.0) continue;
    last_positive = a;
    cum += probs[a];
    if (u < cum) return a;
  }
  return last_positive;
}

// Substream for evaluation item i at a checkpoint.
inline Rng item_stream(std::uint64_t seed, std::uint64_t step, std::size_t i,
                       std::uint64_t purpose) {
  return make_stream(seed, Stream::kEvaluation, {step, i, purpose});
}

inline constexpr std::uint64_t kPurposeAction = 0;
inline constexpr std::uint64_t kPurposeReward = 1;

namespace serial {

// Row i = dist(i); dist returns a length-k vector.
template <class DistFn>
Matrix policy_table(DistFn&& dist, std::size_t n, std::size_t k) {
  Matrix table(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) {
    table.row(static_cast<Eigen::Index>(i)) = dist(i).transpose();
  }
  return table;
}

inline std::vector<std::size_t> sample_actions(const Matrix& table,
                                               std::uint64_t seed,
                                               std::uint64_t step) {
  const auto n = static_cast<std::size_t>(table.rows());
  const auto k = static_cast<std::size_t>(table.cols());
  std::vector<std::size_t> actions(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = item_stream(seed, step, i, kPurposeAction);
    actions[i] = sample_index(table.row(static_cast<Eigen::Index>(i)).data(), k,
                              uniform01(rng));
  }
  return actions;
}

// Sum of grad(i) for i in [0, n), accumulated in index order.
template <class GradFn>
Vector gradient_sum(GradFn&& grad, std::size_t n, std::size_t m) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) sum += grad(i);
  return sum;
}

inline Matrix fd_jacobian(const NetworkParams& params, const Vector& s,
                          double h) {
  return finite_difference_jacobian(params, s, h);
}

}  // namespace serial

namespace omp {

template <class DistFn>
Matrix policy_table(DistFn&& dist, std::size_t n, std::size_t k, int threads) {
  Matrix table(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    table.row(i) = dist(static_cast<std::size_t>(i)).transpose();
  }
  return table;
}

inline std::vector<std::size_t> sample_actions(const Matrix& table,
                                               std::uint64_t seed,
                                               std::uint64_t step,
                                               int threads) {
  const auto n = static_cast<std::int64_t>(table.rows());
  const auto k = static_cast<std::size_t>(table.cols());
  std::vector<std::size_t> actions(static_cast<std::size_t>(n));
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    Rng rng = item_stream(seed, step, static_cast<std::size_t>(i),
                          kPurposeAction);
    actions[static_cast<std::size_t>(i)] =
        sample_index(table.row(i).data(), k, uniform01(rng));
  }
  return actions;
}

// Per-item gradients are computed in parallel into separate slots, then
// summed serially so the result matches serial::gradient_sum exactly.
template <class GradFn>
Vector gradient_sum(GradFn&& grad, std::size_t n, std::size_t m,
                    int threads) {
  std::vector<Vector> parts(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    parts[static_cast<std::size_t>(i)] = grad(static_cast<std::size_t>(i));
  }
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(m));
  for (const Vector& p : parts) sum += p;
  return sum;
}

Matrix fd_jacobian(const NetworkParams& params, const Vector& s, double h,
                   int threads);

}  // namespace omp

}  // namespace entropy_lab::kernels

#endif  // ENTROPY_LAB_KERNELS_HPP_

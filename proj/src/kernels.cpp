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

#include "entropy_lab/kernels.hpp"

#include "entropy_lab/error.hpp"

namespace entropy_lab::kernels::omp {

Matrix fd_jacobian(const NetworkParams& params, const Vector& s, double h,
                   int threads) {
  if (!(h > 0.0)) throw InvalidInput("finite-difference step must be > 0");
  // Surface dimension errors before entering the parallel region.
  forward(params, s);
  const auto m = static_cast<std::int64_t>(params.theta.size());
  Matrix jac(static_cast<Eigen::Index>(params.spec.output_dim), m);
#pragma omp parallel num_threads(threads)
  {
    NetworkParams probe = params;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
      const double orig = probe.theta[i];
      probe.theta[i] = orig + h;
      Vector plus = forward(probe, s);
      probe.theta[i] = orig - h;
      Vector minus = forward(probe, s);
      probe.theta[i] = orig;
      jac.col(i) = (plus - minus) / (2.0 * h);
    }
  }
  return jac;
}

}  // namespace entropy_lab::kernels::omp

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

#ifndef ENTROPY_LAB_VERIFIER_HPP_
#define ENTROPY_LAB_VERIFIER_HPP_

// Randomized verification suites over the theory checks, as run by
// `entropy_lab verify`.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "entropy_lab/theory.hpp"

namespace entropy_lab {

struct VerifierConfig {
  std::string suite = "all";  // lemma1, thm1, thm2 or all
  // Step size for thm1/thm2; unset uses 1e-2 for thm1 and 1e-3 for thm2.
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  bool corrupt_omega_sign = false;
  std::size_t lemma1_cases = 100;
  std::size_t thm1_batches = 50;
  std::size_t thm1_batch_size = 4;
  std::size_t probes = 20;
  std::size_t thm2_cases = 50;
  std::size_t thm2_min_passes = 45;
  std::size_t thm2_linear_cases = 10;
  int threads = 1;
};

struct SuiteSummary {
  std::string name;  // e.g. "thm2/ppo/tanh"
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::size_t required = 0;
  bool pass = false;
  double max_residual = 0.0;
  double seconds = 0.0;
};

struct VerifierResult {
  std::vector<VerificationReport> reports;
  std::vector<SuiteSummary> suites;
  bool pass = false;
};

// Throws InvalidInput for an unknown suite name.
VerifierResult run_verifier(const VerifierConfig& config);

nlohmann::json to_json(const VerifierResult& result);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_VERIFIER_HPP_

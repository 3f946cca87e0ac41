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

#ifndef ENTROPY_LAB_RNG_HPP_
#define ENTROPY_LAB_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace entropy_lab {

using Rng = std::mt19937_64;

// Independent random streams. Every component draws from its own stream so
// that, e.g., changing the agent's exploration does not perturb the states
// the environment serves.
enum class Stream : std::uint32_t {
  kEnvInit = 1,
  kStateSampling = 2,
  kRewardNoise = 3,
  kAgentInit = 4,
  kActionSampling = 5,
  kEvaluation = 6,
  kReplay = 7,
};

// Seeds a stream from (seed, stream, extra...). The same tuple always yields
// the same sequence; distinct tuples give statistically independent ones.
Rng make_stream(std::uint64_t seed, Stream stream,
                std::initializer_list<std::uint64_t> extra = {});

// Uniform double in [0, 1).
double uniform01(Rng& rng);

// Uniform integer in [0, n).
std::size_t uniform_index(Rng& rng, std::size_t n);

double standard_normal(Rng& rng);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_RNG_HPP_

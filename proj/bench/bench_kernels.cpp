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

// Serial reference kernels against their OpenMP versions. The second
// benchmark argument is the thread count; 0 runs the serial kernel.

#include <benchmark/benchmark.h>

#include "entropy_lab/kernels.hpp"

using namespace entropy_lab;

namespace {

struct Fixture {
  NetworkParams params;
  std::vector<Vector> states;

  Fixture(std::size_t hidden, std::size_t n) {
    MlpSpec spec;
    spec.input_dim = 784;
    spec.hidden = {hidden, hidden};
    spec.output_dim = 10;
    Rng rng = make_stream(0, Stream::kAgentInit);
    params = NetworkParams::uniform_init(spec, rng);
    Rng srng = make_stream(0, Stream::kStateSampling);
    for (std::size_t i = 0; i < n; ++i) {
      Vector s(784);
      for (auto& x : s) x = uniform01(srng);
      states.push_back(std::move(s));
    }
  }
};

const Fixture& fixture() {
  static const Fixture f(64, 1000);
  return f;
}

void BM_PolicyTable(benchmark::State& state) {
  const auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  auto dist = [&](std::size_t i) { return softmax(forward(f.params, f.states[i])); };
  for (auto _ : state) {
    Matrix t = threads == 0 ? kernels::serial::policy_table(dist, f.states.size(), 10)
                            : kernels::omp::policy_table(dist, f.states.size(), 10, threads);
    benchmark::DoNotOptimize(t.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.states.size()));
}

void BM_SampleActions(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  Matrix table = Matrix::Constant(10000, 100, 0.01);
  for (auto _ : state) {
    auto a = threads == 0 ? kernels::serial::sample_actions(table, 1, 2)
                          : kernels::omp::sample_actions(table, 1, 2, threads);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}

void BM_GradientSum(benchmark::State& state) {
  const auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  const std::size_t n = 256;
  auto grad = [&](std::size_t i) { return policy_gradient(f.params, f.states[i], i % 10); };
  const std::size_t m = f.params.spec.param_count();
  for (auto _ : state) {
    Vector g = threads == 0 ? kernels::serial::gradient_sum(grad, n, m)
                            : kernels::omp::gradient_sum(grad, n, m, threads);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_FdJacobian(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  MlpSpec spec;
  spec.input_dim = 16;
  spec.hidden = {16, 16};
  spec.output_dim = 8;
  Rng rng = make_stream(1, Stream::kAgentInit);
  auto p = NetworkParams::uniform_init(spec, rng);
  Vector s = Vector::Constant(16, 0.3);
  for (auto _ : state) {
    Matrix j = threads == 0 ? kernels::serial::fd_jacobian(p, s, 1e-5)
                            : kernels::omp::fd_jacobian(p, s, 1e-5, threads);
    benchmark::DoNotOptimize(j.data());
  }
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (int t : {0, 1, 2, 4, 8}) b->Arg(t);
  b->UseRealTime()->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_PolicyTable)->Apply(thread_args);
BENCHMARK(BM_SampleActions)->Apply(thread_args);
BENCHMARK(BM_GradientSum)->Apply(thread_args);
BENCHMARK(BM_FdJacobian)->Apply(thread_args);

BENCHMARK_MAIN();

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

#include "entropy_lab/verifier.hpp"

#include <chrono>
#include <cmath>

#include "entropy_lab/error.hpp"
#include "entropy_lab/rng.hpp"

namespace entropy_lab {

namespace {

constexpr std::uint64_t kLemma1Tag = 1;
constexpr std::uint64_t kThm1Tag = 2;
constexpr std::uint64_t kThm2Tag = 3;

std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + uniform_index(rng, hi - lo + 1);
}

Vector gaussian(std::size_t n, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = standard_normal(rng);
  return v;
}

std::vector<Vector> gaussian_states(std::size_t count, std::size_t dim, Rng& rng) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(gaussian(dim, rng));
  return out;
}

std::vector<Interaction> random_batch(std::size_t n, std::size_t dim, std::size_t k,
                                      Rng& rng) {
  std::vector<Interaction> batch;
  for (std::size_t i = 0; i < n; ++i) {
    Vector s = gaussian(dim, rng);
    std::size_t a = uniform_index(rng, k);
    double r = 2.0 * uniform01(rng) - 1.0;
    batch.push_back({std::move(s), a, r});
  }
  return batch;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// Evaluates prepared cases in parallel; results land in input order.
template <class Case, class Fn>
std::vector<VerificationReport> evaluate(const std::vector<Case>& cases, Fn fn,
                                         int threads) {
  std::vector<VerificationReport> out(cases.size());
  const long n = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (long i = 0; i < n; ++i) out[i] = fn(cases[i]);
  return out;
}

SuiteSummary summarize(const std::string& name, const std::vector<VerificationReport>& rs,
                       std::size_t required, double seconds) {
  SuiteSummary s;
  s.name = name;
  s.cases = rs.size();
  s.required = required;
  s.seconds = seconds;
  for (const auto& r : rs) {
    if (r.pass) ++s.passed;
    double v = r.suite == "lemma1" ? r.relative_error : r.residual;
    if (std::isfinite(v)) s.max_residual = std::max(s.max_residual, v);
  }
  s.pass = s.passed >= required;
  return s;
}

void append(VerifierResult& result, std::vector<VerificationReport> reports,
            SuiteSummary summary) {
  for (auto& r : reports) {
    r.suite = summary.name;
    // The dense deltas are only useful interactively; keep the JSON small.
    r.predicted_delta.resize(0, 0);
    r.actual_delta.resize(0, 0);
    result.reports.push_back(std::move(r));
  }
  result.suites.push_back(std::move(summary));
}

void run_lemma1(const VerifierConfig& config, const VerifyOptions& options,
                VerifierResult& result) {
  struct Case {
    NetworkParams params;
    Vector s;
    std::size_t a;
  };
  Timer timer;
  Rng rng = make_stream(config.seed, Stream::kAgentInit, {kLemma1Tag});
  std::vector<Case> cases;
  for (std::size_t i = 0; i < config.lemma1_cases; ++i) {
    MlpSpec spec;
    spec.input_dim = between(rng, 2, 8);
    spec.output_dim = between(rng, 2, 10);
    std::size_t layers = uniform_index(rng, 3);
    for (std::size_t l = 0; l < layers; ++l) spec.hidden.push_back(between(rng, 1, 8));
    spec.activation = uniform_index(rng, 2) ? Activation::kTanh : Activation::kIdentity;
    spec.bias = uniform_index(rng, 2) == 1;
    NetworkParams params = NetworkParams::uniform_init(spec, rng);
    Vector s = gaussian(spec.input_dim, rng);
    std::size_t a = uniform_index(rng, spec.output_dim);
    cases.push_back({std::move(params), std::move(s), a});
  }
  auto reports = evaluate(
      cases, [&](const Case& c) { return verify_lemma1(c.params, c.s, c.a, 0, options); },
      config.threads);
  auto summary = summarize("lemma1", reports, reports.size(), timer.seconds());
  append(result, std::move(reports), std::move(summary));
}

void run_thm1(const VerifierConfig& config, const VerifyOptions& options,
              VerifierResult& result) {
  struct Case {
    NetworkParams params;
    std::vector<Interaction> batch;
    std::vector<Vector> probes;
  };
  const double lambda = config.lambda.value_or(1e-2);
  for (AgentKind kind : {AgentKind::kPg, AgentKind::kQl}) {
    Timer timer;
    Rng rng = make_stream(config.seed, Stream::kAgentInit,
                          {kThm1Tag, static_cast<std::uint64_t>(kind)});
    std::vector<Case> cases;
    for (std::size_t i = 0; i < config.thm1_batches; ++i) {
      MlpSpec spec;
      spec.input_dim = between(rng, 2, 12);
      spec.output_dim = between(rng, 2, 10);
      spec.activation = Activation::kIdentity;
      spec.bias = false;
      NetworkParams params = NetworkParams::uniform_init(spec, rng);
      auto batch = random_batch(config.thm1_batch_size, spec.input_dim,
                                spec.output_dim, rng);
      auto probes = gaussian_states(config.probes, spec.input_dim, rng);
      cases.push_back({std::move(params), std::move(batch), std::move(probes)});
    }
    auto reports = evaluate(
        cases,
        [&](const Case& c) {
          return verify_theorem1(kind, c.params, c.batch, lambda, c.probes, options);
        },
        config.threads);
    auto summary = summarize("thm1/" + to_string(kind), reports, reports.size(),
                             timer.seconds());
    append(result, std::move(reports), std::move(summary));
  }
}

void run_thm2(const VerifierConfig& config, const VerifyOptions& options,
              VerifierResult& result) {
  struct Case {
    NetworkParams params;
    std::vector<Interaction> batch;
    std::vector<Vector> probes;
  };
  const double lambda = config.lambda.value_or(1e-3);
  for (AgentKind kind : {AgentKind::kA2c, AgentKind::kDqn, AgentKind::kPpo}) {
    for (bool linear : {false, true}) {
      Timer timer;
      Rng rng = make_stream(config.seed, Stream::kAgentInit,
                            {kThm2Tag, static_cast<std::uint64_t>(kind), linear});
      std::size_t count = linear ? config.thm2_linear_cases : config.thm2_cases;
      std::vector<Case> cases;
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t k = between(rng, 2, 10);
        MlpSpec spec;
        spec.input_dim = between(rng, 2, 10);
        spec.output_dim = has_value_head(kind) ? k + 1 : k;
        if (linear) {
          spec.activation = Activation::kIdentity;
        } else {
          spec.activation = Activation::kTanh;
          std::size_t layers = between(rng, 1, 2);
          for (std::size_t l = 0; l < layers; ++l) {
            spec.hidden.push_back(between(rng, 4, 16));
          }
        }
        spec.bias = true;
        NetworkParams params = NetworkParams::uniform_init(spec, rng);
        auto batch = random_batch(config.thm1_batch_size, spec.input_dim, k, rng);
        auto probes = gaussian_states(config.probes, spec.input_dim, rng);
        cases.push_back({std::move(params), std::move(batch), std::move(probes)});
      }
      auto reports = evaluate(
          cases,
          [&](const Case& c) {
            return verify_theorem2(kind, c.params, c.batch, lambda, c.probes, 0.2,
                                   options);
          },
          config.threads);
      std::size_t required =
          linear ? reports.size() : std::min(config.thm2_min_passes, reports.size());
      auto summary = summarize("thm2/" + to_string(kind) + (linear ? "/linear" : "/tanh"),
                               reports, required, timer.seconds());
      append(result, std::move(reports), std::move(summary));
    }
  }
}

}  // namespace

VerifierResult run_verifier(const VerifierConfig& config) {
  const std::string& s = config.suite;
  if (s != "all" && s != "lemma1" && s != "thm1" && s != "thm2") {
    throw InvalidInput("unknown suite '" + s + "' (expected lemma1, thm1, thm2 or all)");
  }
  if (config.lambda && (!std::isfinite(*config.lambda) || *config.lambda < 0.0)) {
    throw InvalidInput("lambda must be finite and >= 0");
  }
  VerifyOptions options;
  options.flip_omega_sign = config.corrupt_omega_sign;

  VerifierResult result;
  if (s == "all" || s == "lemma1") run_lemma1(config, options, result);
  if (s == "all" || s == "thm1") run_thm1(config, options, result);
  if (s == "all" || s == "thm2") run_thm2(config, options, result);
  result.pass = true;
  for (const auto& suite : result.suites) result.pass = result.pass && suite.pass;
  return result;
}

nlohmann::json to_json(const VerifierResult& result) {
  nlohmann::json j;
  j["pass"] = result.pass;
  j["suites"] = nlohmann::json::array();
  for (const auto& s : result.suites) {
    j["suites"].push_back({{"name", s.name},
                           {"cases", s.cases},
                           {"passed", s.passed},
                           {"required", s.required},
                           {"pass", s.pass},
                           {"max_residual", s.max_residual},
                           {"seconds", s.seconds}});
  }
  j["cases"] = nlohmann::json::array();
  for (const auto& r : result.reports) j["cases"].push_back(to_json(r));
  return j;
}

}  // namespace entropy_lab

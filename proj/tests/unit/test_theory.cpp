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

#include <cmath>

#include "doctest.h"
#include "entropy_lab/error.hpp"
#include "entropy_lab/theory.hpp"
#include "support/oracles.hpp"

using namespace entropy_lab;
namespace t = entropy_lab::testing;

namespace {

MlpSpec linear_spec(std::size_t d, std::size_t k) {
  MlpSpec spec;
  spec.input_dim = d;
  spec.output_dim = k;
  spec.bias = false;
  spec.activation = Activation::kIdentity;
  return spec;
}

MlpSpec tanh_spec(std::size_t d, std::size_t outputs) {
  MlpSpec spec;
  spec.input_dim = d;
  spec.hidden = {8, 6};
  spec.output_dim = outputs;
  spec.activation = Activation::kTanh;
  return spec;
}

std::vector<Interaction> batch_of(Rng& rng, std::size_t n, std::size_t d, std::size_t k) {
  std::vector<Interaction> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({t::gaussian(d, rng), uniform_index(rng, k), 2.0 * uniform01(rng) - 1.0});
  }
  return out;
}

std::vector<Vector> probes(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(t::gaussian(d, rng));
  return out;
}

}  // namespace

TEST_SUITE("theory") {

TEST_CASE("linear omega examples") {
  auto p = NetworkParams::zeros(linear_spec(2, 2));
  Vector s(2);
  s << 1, 0;
  Matrix o = omega_theorem1(AgentKind::kPg, p, s, 0, 1.0);
  Matrix want(2, 2);
  want << 0.5, 0, -0.5, 0;
  CHECK(o == want);
  CHECK(omega_theorem1(AgentKind::kPg, p, s, 0, 0.0).isZero(0.0));

  Rng rng = make_stream(1, Stream::kAgentInit);
  auto q = NetworkParams::uniform_init(linear_spec(4, 5), rng);
  Vector x = t::gaussian(4, rng);
  Matrix oq = omega_theorem1(AgentKind::kQl, q, x, 3, 0.7);
  for (Eigen::Index k = 0; k < 5; ++k) {
    if (k == 3) {
      CHECK((oq.row(k).transpose() - 2 * (0.7 - forward(q, x)[3]) * x).norm() <= 1e-15);
    } else {
      CHECK(oq.row(k).isZero(0.0));
    }
  }
}

TEST_CASE("linear omega needs a biasless linear net") {
  MlpSpec spec = linear_spec(2, 2);
  spec.bias = true;
  auto p = NetworkParams::zeros(spec);
  CHECK_THROWS_AS(omega_theorem1(AgentKind::kPg, p, Vector::Zero(2), 0, 1.0), InvalidInput);
  CHECK_THROWS_AS(omega_theorem1(AgentKind::kA2c, NetworkParams::zeros(linear_spec(2, 2)),
                                 Vector::Zero(2), 0, 1.0),
                  InvalidInput);
}

TEST_CASE("linear pg and ql updates are predicted exactly") {
  Rng rng = make_stream(2, Stream::kAgentInit);
  for (AgentKind kind : {AgentKind::kPg, AgentKind::kQl}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t d = 2 + uniform_index(rng, 8), k = 2 + uniform_index(rng, 8);
      auto p = NetworkParams::uniform_init(linear_spec(d, k), rng);
      auto b = batch_of(rng, 4, d, k);
      auto x = probes(rng, 20, d);
      auto report = verify_theorem1(kind, p, b, 0.05, x);
      CHECK(report.pass);
      CHECK(report.residual <= 1e-10);
    }
  }
}

TEST_CASE("linear update degenerate cases") {
  Rng rng = make_stream(3, Stream::kAgentInit);
  auto p = NetworkParams::uniform_init(linear_spec(3, 4), rng);
  auto b = batch_of(rng, 1, 3, 4);
  auto x = probes(rng, 5, 3);
  auto zero = verify_theorem1(AgentKind::kPg, p, b, 0.0, x);
  CHECK(zero.residual == 0.0);
  CHECK(zero.predicted_delta.isZero(0.0));
  CHECK(zero.actual_delta.isZero(0.0));

  std::vector<Interaction> repeated(6, b[0]);
  auto single = verify_theorem1(AgentKind::kPg, p, b, 0.1, x);
  auto many = verify_theorem1(AgentKind::kPg, p, repeated, 0.1, x);
  CHECK((single.predicted_delta - many.predicted_delta).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("omega is the negative loss gradient") {
  Rng rng = make_stream(4, Stream::kAgentInit);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t d = 3, k = 2 + uniform_index(rng, 5);
    Vector s = t::gaussian(d, rng);
    std::size_t a = uniform_index(rng, k);
    double r = 2.0 * uniform01(rng) - 1.0;
    auto q = NetworkParams::uniform_init(tanh_spec(d, k), rng);
    CHECK((omega_theorem2(AgentKind::kDqn, q, nullptr, s, a, r) + dqn_loss_grad(q, s, a, r))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    auto ac = NetworkParams::uniform_init(tanh_spec(d, k + 1), rng);
    CHECK((omega_theorem2(AgentKind::kA2c, ac, nullptr, s, a, r) + a2c_loss_grad(ac, s, a, r))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    NetworkParams snap = ac;
    snap.theta += 0.1 * t::gaussian(static_cast<std::size_t>(ac.theta.size()), rng);
    CHECK((omega_theorem2(AgentKind::kPpo, ac, &snap, s, a, r) +
           ppo_loss_grad(ac, snap, s, a, r, 0.2))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);

    auto lin = NetworkParams::uniform_init(linear_spec(d, k), rng);
    Matrix o_pg = omega_theorem1(AgentKind::kPg, lin, s, a, r);
    Matrix o_ql = omega_theorem1(AgentKind::kQl, lin, s, a, r);
    Vector gpg = pg_loss_grad(lin, s, a, r), gql = ql_loss_grad(lin, s, a, r);
    Eigen::Map<const Matrix> shaped_pg(gpg.data(), static_cast<Eigen::Index>(k), 3);
    Eigen::Map<const Matrix> shaped_ql(gql.data(), static_cast<Eigen::Index>(k), 3);
    CHECK((o_pg + shaped_pg).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((o_ql + shaped_ql).cwiseAbs().maxCoeff() <= 1e-10);

    // Structural contrast: every pg row moves, exactly one ql row does.
    std::size_t pg_rows = 0, ql_rows = 0;
    for (Eigen::Index row = 0; row < o_pg.rows(); ++row) {
      if (!o_pg.row(row).isZero(0.0)) ++pg_rows;
      if (!o_ql.row(row).isZero(0.0)) ++ql_rows;
    }
    CHECK(pg_rows == k);
    CHECK(ql_rows == 1);
  }
}

TEST_CASE("general omega special cases") {
  Rng rng = make_stream(5, Stream::kAgentInit);
  auto q = NetworkParams::uniform_init(tanh_spec(3, 4), rng);
  Vector s = t::gaussian(3, rng);
  CHECK(omega_theorem2(AgentKind::kDqn, q, nullptr, s, 2, forward(q, s)[2]).isZero(0.0));

  // Snapshot with a much lower logit for the action: ratio far above 1 + clip.
  auto p = NetworkParams::uniform_init(tanh_spec(3, 5), rng);
  NetworkParams snap = p;
  snap.theta[snap.theta.size() - 5 + 1] -= 0.3;
  double ratio = softmax(forward(p, s).head(4))[1] / softmax(forward(snap, s).head(4))[1];
  REQUIRE(ratio > 1.2);
  double r = 0.6;
  double v = forward(p, s)[4];
  Vector o = omega_theorem2(AgentKind::kPpo, p, &snap, s, 1, r);
  Vector value_only = (r - v) * output_jacobian(p, s).row(4).transpose();
  CHECK((o - value_only).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(omega_theorem2(AgentKind::kPg, p, nullptr, s, 1, r), InvalidInput);
}

TEST_CASE("first-order residual scales quadratically on tanh nets") {
  Rng rng = make_stream(6, Stream::kAgentInit);
  for (AgentKind kind : {AgentKind::kA2c, AgentKind::kDqn, AgentKind::kPpo}) {
    int passes = 0;
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t k = 2 + uniform_index(rng, 6);
      auto p = NetworkParams::uniform_init(tanh_spec(4, has_value_head(kind) ? k + 1 : k), rng);
      auto report = verify_theorem2(kind, p, batch_of(rng, 4, 4, k), 1e-3, probes(rng, 20, 4));
      if (report.pass && report.ratio >= 3.5 && report.ratio <= 4.5) ++passes;
      CHECK(report.residual < 0.1 * report.predicted_norm);
    }
    CHECK(passes >= 18);
  }
}

TEST_CASE("first-order prediction is exact on linear nets and trivial at lambda 0") {
  Rng rng = make_stream(7, Stream::kAgentInit);
  for (AgentKind kind : {AgentKind::kA2c, AgentKind::kDqn, AgentKind::kPpo}) {
    MlpSpec spec = linear_spec(5, has_value_head(kind) ? 4 : 3);
    spec.bias = true;
    auto p = NetworkParams::uniform_init(spec, rng);
    auto b = batch_of(rng, 4, 5, 3);
    auto x = probes(rng, 20, 5);
    auto report = verify_theorem2(kind, p, b, 1e-2, x);
    CHECK(report.pass);
    CHECK(report.residual <= 1e-10);
    auto zero = verify_theorem2(kind, p, b, 0.0, x);
    CHECK(zero.residual == 0.0);
    CHECK(zero.residual_half == 0.0);
    CHECK(zero.pass);
  }
}

TEST_CASE("a flipped omega sign fails every check") {
  Rng rng = make_stream(8, Stream::kAgentInit);
  VerifyOptions flip;
  flip.flip_omega_sign = true;
  auto lin = NetworkParams::uniform_init(linear_spec(3, 4), rng);
  CHECK_FALSE(verify_theorem1(AgentKind::kQl, lin, batch_of(rng, 4, 3, 4), 0.1,
                              probes(rng, 5, 3), flip)
                  .pass);
  auto p = NetworkParams::uniform_init(tanh_spec(3, 4), rng);
  CHECK_FALSE(verify_theorem2(AgentKind::kDqn, p, batch_of(rng, 4, 3, 4), 1e-3,
                              probes(rng, 5, 3), 0.2, flip)
                  .pass);
}

TEST_CASE("softmax gradient identity on random nets") {
  Rng rng = make_stream(9, Stream::kAgentInit);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t k = 2 + uniform_index(rng, 9);
    auto p = NetworkParams::uniform_init(t::random_spec(rng, k), rng);
    Vector s = t::gaussian(p.spec.input_dim, rng);
    auto report = verify_lemma1(p, s, uniform_index(rng, k));
    CHECK(report.pass);
    CHECK(report.relative_error <= 1e-6);
  }
  // Coefficients [1(a=k) - pi_k] sum to zero, so the gradients over a do too.
  auto p = NetworkParams::zeros(linear_spec(2, 2));
  Vector s(2);
  s << 1, 0;
  auto report = verify_lemma1(p, s, 0);
  CHECK(report.pass);
}

TEST_CASE("reports serialize the documented fields") {
  VerificationReport r;
  r.suite = "thm2";
  r.agent = "dqn";
  r.lambda = 1e-3;
  r.ratio = std::nan("");
  auto j = to_json(r);
  for (const char* key : {"agent", "lambda", "residual", "residual_half", "ratio", "pass"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["ratio"].is_null());
}

}  // TEST_SUITE

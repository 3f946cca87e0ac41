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
#include "entropy_lab/numerics.hpp"
#include "entropy_lab/rng.hpp"
#include "support/oracles.hpp"

using namespace entropy_lab;
using entropy_lab::testing::gaussian;

namespace {

NetworkParams linear(std::size_t d, std::size_t k, std::initializer_list<double> w) {
  MlpSpec spec;
  spec.input_dim = d;
  spec.output_dim = k;
  spec.bias = false;
  spec.activation = Activation::kIdentity;
  Vector theta(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) theta[i++] = x;
  return NetworkParams(spec, theta);
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// hidden [2], tanh, with biases; values checked by hand elsewhere.
NetworkParams small_tanh_net() {
  MlpSpec spec;
  spec.input_dim = 2;
  spec.hidden = {2};
  spec.output_dim = 2;
  spec.activation = Activation::kTanh;
  return NetworkParams(
      spec, vec({0.1, -0.2, 0.3, 0.4, 0.05, -0.05, 0.5, -0.6, 0.7, 0.8, 0.01, 0.02}));
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("parameter count follows the layer shapes") {
  MlpSpec spec;
  spec.input_dim = 784;
  spec.hidden = {64, 64};
  spec.output_dim = 11;
  CHECK(spec.param_count() == 784 * 64 + 64 + 64 * 64 + 64 + 64 * 11 + 11);
  spec.bias = false;
  spec.hidden.clear();
  spec.output_dim = 10;
  CHECK(spec.param_count() == 7840);
  CHECK(NetworkParams::zeros(spec).theta.size() == 7840);
}

TEST_CASE("invalid specs and parameter vectors are rejected") {
  MlpSpec spec;
  spec.input_dim = 0;
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.input_dim = 2;
  spec.hidden = {0};
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
  spec.hidden = {};
  CHECK_THROWS_AS(NetworkParams(spec, Vector::Zero(4)), InvalidInput);
  Vector bad = Vector::Zero(static_cast<Eigen::Index>(spec.param_count()));
  bad[0] = std::nan("");
  CHECK_THROWS_AS(NetworkParams(spec, bad), InvalidInput);
}

TEST_CASE("forward of a linear net is W s") {
  auto p = linear(2, 2, {1, 0, 0, 1});
  Vector z = forward(p, vec({3, -1}));
  CHECK(z[0] == 3.0);
  CHECK(z[1] == -1.0);
  auto zero = linear(3, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(forward(zero, vec({1, 2, 3})).isZero(0.0));
  CHECK_THROWS_AS(forward(p, vec({1, 2, 3})), InvalidInput);
}

TEST_CASE("forward of a one-hidden-layer tanh net matches the hand composition") {
  Vector z = forward(small_tanh_net(), vec({1, 0}));
  CHECK(z[0] == doctest::Approx(-0.06250868).epsilon(1e-7));
  CHECK(z[1] == doctest::Approx(0.32015445).epsilon(1e-7));
}

TEST_CASE("linear Jacobian has the block structure") {
  auto p = linear(2, 2, {0.3, -0.1, 2.0, 0.5});
  Matrix j = output_jacobian(p, vec({5, 7}));
  Matrix want(2, 4);
  want << 5, 7, 0, 0, 0, 0, 5, 7;
  CHECK(j == want);
  CHECK(output_jacobian(p, vec({0, 0})).isZero(0.0));
  CHECK((finite_difference_jacobian(p, vec({5, 7}), 1e-5) - want).cwiseAbs().maxCoeff() <=
        1e-9);
}

TEST_CASE("Jacobian matches central differences on random nets") {
  Rng rng = make_stream(11, Stream::kAgentInit);
  for (int trial = 0; trial < 100; ++trial) {
    MlpSpec spec = entropy_lab::testing::random_spec(rng, 1 + uniform_index(rng, 6));
    if (uniform_index(rng, 3) == 0) spec.activation = Activation::kRelu;
    auto p = NetworkParams::uniform_init(spec, rng);
    Vector s = gaussian(spec.input_dim, rng);
    Matrix analytic = output_jacobian(p, s);
    Matrix fd = finite_difference_jacobian(p, s, 1e-5);
    REQUIRE(analytic.rows() == static_cast<Eigen::Index>(spec.output_dim));
    REQUIRE(analytic.cols() == static_cast<Eigen::Index>(spec.param_count()));
    double rel = (analytic - fd).norm() / std::max(fd.norm(), 1e-12);
    CHECK(rel <= 1e-6);
  }
}

TEST_CASE("finite differences are second order") {
  auto p = small_tanh_net();
  Vector s = vec({0.7, -1.3});
  Matrix analytic = output_jacobian(p, s);
  double e1 = (finite_difference_jacobian(p, s, 1e-2) - analytic).norm();
  double e2 = (finite_difference_jacobian(p, s, 5e-3) - analytic).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("backprop is the vector-Jacobian product") {
  Rng rng = make_stream(12, Stream::kAgentInit);
  for (int trial = 0; trial < 20; ++trial) {
    MlpSpec spec = entropy_lab::testing::random_spec(rng, 3);
    auto p = NetworkParams::uniform_init(spec, rng);
    Vector s = gaussian(spec.input_dim, rng);
    Vector g = gaussian(3, rng);
    Vector want = output_jacobian(p, s).transpose() * g;
    CHECK((backprop(p, s, g) - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("softmax examples") {
  Vector p = softmax(vec({0, 0}));
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  p = softmax(vec({std::log(2.0), 0}));
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  p = softmax(vec({1000, 0}));
  CHECK(std::isfinite(p[0]));
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(softmax(vec({1, std::nan("")})), InvalidInput);
  CHECK_THROWS_AS(softmax(vec({INFINITY, 0})), InvalidInput);
}

TEST_CASE("softmax stays on the simplex for large inputs") {
  Rng rng = make_stream(13, Stream::kAgentInit);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t k = 1 + uniform_index(rng, 20);
    Vector z(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = 2000.0 * uniform01(rng) - 1000.0;
    Vector p = softmax(z);
    Eigen::Index zmax, pmax;
    z.maxCoeff(&zmax);
    p.maxCoeff(&pmax);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    CHECK(p[zmax] == p[pmax]);
  }
}

TEST_CASE("policy gradient under a uniform policy") {
  MlpSpec spec;
  spec.input_dim = 3;
  spec.output_dim = 10;
  spec.bias = false;
  spec.activation = Activation::kIdentity;
  auto p = NetworkParams::zeros(spec);
  Vector s = vec({1, 0, 0});
  Vector g = policy_gradient(p, s, 4);
  // Entry (k, 0) is the coefficient for output k times pi(a|s) = 0.1.
  for (std::size_t k = 0; k < 10; ++k) {
    double want = 0.1 * ((k == 4 ? 1.0 : 0.0) - 0.1);
    CHECK(g[static_cast<Eigen::Index>(3 * k)] == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK_THROWS_AS(policy_gradient(p, s, 10), InvalidInput);
}

TEST_CASE("policy gradient on the identity net") {
  auto p = linear(2, 2, {1, 0, 0, 1});
  Vector g = policy_gradient(p, vec({1, 0}), 0);
  // d pi(0|s) / d W_00 = pi_0 pi_1 = e / (e + 1)^2.
  CHECK(g[0] == doctest::Approx(0.19661193324148185).epsilon(1e-12));
}

TEST_CASE("policy gradients sum to zero and match differences of pi") {
  Rng rng = make_stream(14, Stream::kAgentInit);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t k = 2 + uniform_index(rng, 8);
    MlpSpec spec = entropy_lab::testing::random_spec(rng, k);
    auto p = NetworkParams::uniform_init(spec, rng);
    Vector s = gaussian(spec.input_dim, rng);
    Vector total = Vector::Zero(p.theta.size());
    for (std::size_t a = 0; a < k; ++a) total += policy_gradient(p, s, a);
    CHECK(total.cwiseAbs().maxCoeff() <= 1e-10);

    std::size_t a = uniform_index(rng, k);
    Vector fd = entropy_lab::testing::fd_gradient(p, [&](const NetworkParams& q) {
      return softmax(forward(q, s))[static_cast<Eigen::Index>(a)];
    });
    CHECK(entropy_lab::testing::relative_error(policy_gradient(p, s, a), fd) <= 1e-6);
  }
}

TEST_CASE("sgd step arithmetic") {
  MlpSpec spec;
  spec.input_dim = 2;
  spec.output_dim = 1;
  spec.bias = false;
  NetworkParams p(spec, vec({1, 1}));
  NetworkParams q = sgd_step(p, vec({2, -2}), 0.5);
  CHECK(q.theta == vec({0, 2}));
  CHECK(p.theta == vec({1, 1}));
  CHECK(sgd_step(p, vec({0, 0}), 0.5).theta == p.theta);
  Vector g = vec({0.3, -0.7});
  Vector d = sgd_step(p, g, 0.2).theta - sgd_step(p, g, 0.1).theta;
  CHECK((d + 0.1 * g).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(sgd_step(p, vec({INFINITY, 0}), 0.1), InvalidInput);
  CHECK_THROWS_AS(sgd_step(p, vec({1, 0}), -0.1), InvalidInput);
}

TEST_CASE("a step on a linear net moves outputs by exactly the Jacobian prediction") {
  Rng rng = make_stream(15, Stream::kAgentInit);
  for (int trial = 0; trial < 20; ++trial) {
    MlpSpec spec = entropy_lab::testing::random_spec(rng, 4, false);
    auto p = NetworkParams::uniform_init(spec, rng);
    Vector g = gaussian(spec.param_count(), rng);
    Vector x = gaussian(spec.input_dim, rng);
    Vector predicted = forward(p, x) - 0.01 * output_jacobian(p, x) * g;
    CHECK((forward(sgd_step(p, g, 0.01), x) - predicted).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("layer views follow the documented layout") {
  auto p = small_tanh_net();
  auto w0 = layer_weights(p, 0);
  CHECK(w0(0, 1) == -0.2);
  CHECK(w0(1, 0) == 0.3);
  auto w1 = layer_weights(p, 1);
  CHECK(w1(1, 1) == 0.8);
}

TEST_CASE("uniform initialization respects the fan-in bound") {
  MlpSpec spec;
  spec.input_dim = 16;
  spec.hidden = {4};
  spec.output_dim = 3;
  Rng rng = make_stream(3, Stream::kAgentInit);
  auto p = NetworkParams::uniform_init(spec, rng);
  CHECK(layer_weights(p, 0).cwiseAbs().maxCoeff() <= 0.25);
  CHECK(layer_weights(p, 1).cwiseAbs().maxCoeff() <= 0.5);
  Rng again = make_stream(3, Stream::kAgentInit);
  CHECK(NetworkParams::uniform_init(spec, again).theta == p.theta);
}

}  // TEST_SUITE

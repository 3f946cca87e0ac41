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

#include "entropy_lab/numerics.hpp"

#include <cmath>

#include "entropy_lab/error.hpp"

namespace entropy_lab {

namespace {

struct LayerShape {
  std::size_t in;
  std::size_t out;
  std::size_t weight_offset;
  std::size_t bias_offset;  // == weight_offset + in*out; unused without bias
};

std::vector<LayerShape> layer_shapes(const MlpSpec& spec) {
  std::vector<LayerShape> shapes;
  shapes.reserve(spec.layer_count());
  std::size_t in = spec.input_dim;
  std::size_t offset = 0;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    std::size_t out = l < spec.hidden.size() ? spec.hidden[l] : spec.output_dim;
    LayerShape shape{in, out, offset, offset + in * out};
    offset = shape.bias_offset + (spec.bias ? out : 0);
    shapes.push_back(shape);
    in = out;
  }
  return shapes;
}

double activate(Activation act, double x) {
  switch (act) {
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
    case Activation::kIdentity:
      return x;
  }
  return x;
}

// Derivative expressed through the pre-activation value.
double activate_grad(Activation act, double pre) {
  switch (act) {
    case Activation::kTanh: {
      double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    case Activation::kRelu:
      return pre > 0.0 ? 1.0 : 0.0;
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

struct Trace {
  std::vector<Vector> inputs;  // input fed to each layer
  std::vector<Vector> pre;     // pre-activation of each layer
};

void check_input(const NetworkParams& params, const Vector& s) {
  if (static_cast<std::size_t>(s.size()) != params.spec.input_dim) {
    throw InvalidInput("state has dimension " + std::to_string(s.size()) +
                       ", network expects " +
                       std::to_string(params.spec.input_dim));
  }
}

Vector run_forward(const NetworkParams& params,
                   const std::vector<LayerShape>& shapes, const Vector& s,
                   Trace* trace) {
  const MlpSpec& spec = params.spec;
  Vector a = s;
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    const LayerShape& sh = shapes[l];
    Eigen::Map<const Matrix> w(params.theta.data() + sh.weight_offset,
                               static_cast<Eigen::Index>(sh.out),
                               static_cast<Eigen::Index>(sh.in));
    Vector z = w * a;
    if (spec.bias) {
      z += Eigen::Map<const Vector>(params.theta.data() + sh.bias_offset,
                                    static_cast<Eigen::Index>(sh.out));
    }
    if (trace != nullptr) {
      trace->inputs.push_back(a);
      trace->pre.push_back(z);
    }
    if (l + 1 == shapes.size()) return z;
    a = z.unaryExpr([&](double x) { return activate(spec.activation, x); });
  }
  return a;
}

}  // namespace

std::string to_string(Activation activation) {
  switch (activation) {
    case Activation::kTanh:
      return "tanh";
    case Activation::kRelu:
      return "relu";
    case Activation::kIdentity:
      return "identity";
  }
  return "?";
}

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw InvalidInput("unknown activation '" + name + "'");
}

std::size_t MlpSpec::param_count() const {
  std::size_t count = 0;
  std::size_t in = input_dim;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    std::size_t out = l < hidden.size() ? hidden[l] : output_dim;
    count += in * out + (bias ? out : 0);
    in = out;
  }
  return count;
}

void MlpSpec::validate() const {
  if (input_dim == 0) throw InvalidInput("input_dim must be >= 1");
  if (output_dim == 0) throw InvalidInput("output_dim must be >= 1");
  for (std::size_t h : hidden) {
    if (h == 0) throw InvalidInput("hidden layer sizes must be >= 1");
  }
}

NetworkParams::NetworkParams(MlpSpec s, Vector t)
    : spec(std::move(s)), theta(std::move(t)) {
  spec.validate();
  if (static_cast<std::size_t>(theta.size()) != spec.param_count()) {
    throw InvalidInput("parameter vector has length " +
                       std::to_string(theta.size()) + ", spec needs " +
                       std::to_string(spec.param_count()));
  }
  if (!all_finite()) throw InvalidInput("parameters must be finite");
}

NetworkParams NetworkParams::zeros(const MlpSpec& spec) {
  spec.validate();
  return NetworkParams(spec,
                       Vector::Zero(static_cast<Eigen::Index>(spec.param_count())));
}

NetworkParams NetworkParams::uniform_init(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  Vector theta(static_cast<Eigen::Index>(spec.param_count()));
  for (const LayerShape& sh : layer_shapes(spec)) {
    double bound = 1.0 / std::sqrt(static_cast<double>(sh.in));
    std::size_t end = sh.bias_offset + (spec.bias ? sh.out : 0);
    for (std::size_t i = sh.weight_offset; i < end; ++i) {
      theta[static_cast<Eigen::Index>(i)] = bound * (2.0 * uniform01(rng) - 1.0);
    }
  }
  return NetworkParams(spec, std::move(theta));
}

bool NetworkParams::all_finite() const { return theta.allFinite(); }

Eigen::Map<const Matrix> layer_weights(const NetworkParams& params,
                                       std::size_t layer) {
  auto shapes = layer_shapes(params.spec);
  if (layer >= shapes.size()) throw InvalidInput("layer index out of range");
  const LayerShape& sh = shapes[layer];
  return Eigen::Map<const Matrix>(params.theta.data() + sh.weight_offset,
                                  static_cast<Eigen::Index>(sh.out),
                                  static_cast<Eigen::Index>(sh.in));
}

Vector forward(const NetworkParams& params, const Vector& s) {
  check_input(params, s);
  return run_forward(params, layer_shapes(params.spec), s, nullptr);
}

Matrix output_jacobian(const NetworkParams& params, const Vector& s) {
  check_input(params, s);
  const MlpSpec& spec = params.spec;
  auto shapes = layer_shapes(spec);
  Trace trace;
  run_forward(params, shapes, s, &trace);

  const auto k_out = static_cast<Eigen::Index>(spec.output_dim);
  Matrix jac = Matrix::Zero(k_out, static_cast<Eigen::Index>(spec.param_count()));
  // delta(k, i): d z_k / d pre_i of the current layer.
  Matrix delta = Matrix::Identity(k_out, k_out);
  for (std::size_t l = shapes.size(); l-- > 0;) {
    const LayerShape& sh = shapes[l];
    const Vector& input = trace.inputs[l];
    for (Eigen::Index k = 0; k < k_out; ++k) {
      for (std::size_t i = 0; i < sh.out; ++i) {
        double d = delta(k, static_cast<Eigen::Index>(i));
        auto row = jac.row(k).segment(
            static_cast<Eigen::Index>(sh.weight_offset + i * sh.in),
            static_cast<Eigen::Index>(sh.in));
        row = d * input.transpose();
        if (spec.bias) jac(k, static_cast<Eigen::Index>(sh.bias_offset + i)) = d;
      }
    }
    if (l == 0) break;
    Eigen::Map<const Matrix> w(params.theta.data() + sh.weight_offset,
                               static_cast<Eigen::Index>(sh.out),
                               static_cast<Eigen::Index>(sh.in));
    Matrix next = delta * w;
    const Vector& pre = trace.pre[l - 1];
    for (Eigen::Index j = 0; j < next.cols(); ++j) {
      next.col(j) *= activate_grad(spec.activation, pre[j]);
    }
    delta = std::move(next);
  }
  return jac;
}

Vector backprop(const NetworkParams& params, const Vector& s,
                const Vector& output_grad) {
  check_input(params, s);
  const MlpSpec& spec = params.spec;
  if (static_cast<std::size_t>(output_grad.size()) != spec.output_dim) {
    throw InvalidInput("output gradient has wrong length");
  }
  auto shapes = layer_shapes(spec);
  Trace trace;
  run_forward(params, shapes, s, &trace);

  Vector grad = Vector::Zero(static_cast<Eigen::Index>(spec.param_count()));
  Vector delta = output_grad;
  for (std::size_t l = shapes.size(); l-- > 0;) {
    const LayerShape& sh = shapes[l];
    Eigen::Map<Matrix> gw(grad.data() + sh.weight_offset,
                          static_cast<Eigen::Index>(sh.out),
                          static_cast<Eigen::Index>(sh.in));
    gw.noalias() = delta * trace.inputs[l].transpose();
    if (spec.bias) {
      grad.segment(static_cast<Eigen::Index>(sh.bias_offset),
                   static_cast<Eigen::Index>(sh.out)) = delta;
    }
    if (l == 0) break;
    Eigen::Map<const Matrix> w(params.theta.data() + sh.weight_offset,
                               static_cast<Eigen::Index>(sh.out),
                               static_cast<Eigen::Index>(sh.in));
    Vector back = w.transpose() * delta;
    const Vector& pre = trace.pre[l - 1];
    for (Eigen::Index j = 0; j < back.size(); ++j) {
      back[j] *= activate_grad(spec.activation, pre[j]);
    }
    delta = std::move(back);
  }
  return grad;
}

Vector softmax(const Vector& z) {
  if (z.size() == 0) throw InvalidInput("softmax of an empty vector");
  if (!z.allFinite()) throw InvalidInput("softmax input must be finite");
  Vector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

Vector policy_gradient(const NetworkParams& params, const Vector& s,
                       std::size_t a, std::size_t action_count) {
  std::size_t k = action_count == 0 ? params.spec.output_dim : action_count;
  if (k > params.spec.output_dim) {
    throw InvalidInput("action_count exceeds network outputs");
  }
  if (a >= k) {
    throw InvalidInput("action " + std::to_string(a) + " out of range [0, " +
                       std::to_string(k) + ")");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  Vector pi = softmax(forward(params, s).head(kk));
  Vector coef = -pi;
  coef[static_cast<Eigen::Index>(a)] += 1.0;
  Matrix jac = output_jacobian(params, s);
  Vector g = jac.topRows(kk).transpose() * coef;
  return pi[static_cast<Eigen::Index>(a)] * g;
}

NetworkParams sgd_step(const NetworkParams& params, const Vector& grad,
                       double lr) {
  if (grad.size() != params.theta.size()) {
    throw InvalidInput("gradient length does not match parameters");
  }
  if (!grad.allFinite()) throw InvalidInput("gradient must be finite");
  if (!std::isfinite(lr) || lr < 0.0) {
    throw InvalidInput("learning rate must be finite and non-negative");
  }
  NetworkParams next = params;
  next.theta -= lr * grad;
  return next;
}

Matrix finite_difference_jacobian(const NetworkParams& params,
                                  const Vector& s, double h) {
  if (!(h > 0.0)) throw InvalidInput("finite-difference step must be > 0");
  check_input(params, s);
  const auto m = params.theta.size();
  Matrix jac(static_cast<Eigen::Index>(params.spec.output_dim), m);
  NetworkParams probe = params;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double orig = probe.theta[i];
    probe.theta[i] = orig + h;
    Vector plus = forward(probe, s);
    probe.theta[i] = orig - h;
    Vector minus = forward(probe, s);
    probe.theta[i] = orig;
    jac.col(i) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

}  // namespace entropy_lab

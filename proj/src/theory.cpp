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

#include "entropy_lab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entropy_lab/error.hpp"

namespace entropy_lab {

namespace {

std::size_t action_outputs(AgentKind kind, const NetworkParams& params) {
  return has_value_head(kind) ? params.spec.output_dim - 1 : params.spec.output_dim;
}

Vector score_row(const Vector& pi, std::size_t a) {
  Vector coef = -pi;
  coef[static_cast<Eigen::Index>(a)] += 1.0;
  return coef;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// probes x K matrix of output changes between two parameter sets.
Matrix output_change(const NetworkParams& before, const NetworkParams& after,
                     std::span<const Vector> probes, std::size_t k) {
  Matrix delta(static_cast<Eigen::Index>(probes.size()), static_cast<Eigen::Index>(k));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    Vector d = forward(after, probes[p]) - forward(before, probes[p]);
    delta.row(static_cast<Eigen::Index>(p)) = d.head(static_cast<Eigen::Index>(k)).transpose();
  }
  return delta;
}

void check_probes(std::span<const Vector> probes) {
  if (probes.empty()) throw InvalidInput("verification needs at least one probe state");
}

}  // namespace

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["agent"] = report.agent;
  j["lambda"] = report.lambda;
  j["residual"] = report.residual;
  j["residual_half"] = report.residual_half;
  if (std::isfinite(report.ratio)) {
    j["ratio"] = report.ratio;
  } else {
    j["ratio"] = nullptr;
  }
  j["predicted_norm"] = report.predicted_norm;
  if (report.suite == "lemma1") j["relative_error"] = report.relative_error;
  j["pass"] = report.pass;
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

Matrix omega_theorem1(AgentKind kind, const NetworkParams& params,
                      const Vector& s, std::size_t a, double r) {
  if (!params.spec.linear_in_params() || params.spec.bias) {
    throw InvalidInput("exact linear terms need a biasless network without hidden layers");
  }
  const auto k = static_cast<Eigen::Index>(params.spec.output_dim);
  if (a >= static_cast<std::size_t>(k)) throw InvalidInput("action out of range");
  Vector z = forward(params, s);
  Matrix omega = Matrix::Zero(k, s.size());
  switch (kind) {
    case AgentKind::kPg: {
      Vector coef = score_row(softmax(z), a);
      omega = r * coef * s.transpose();
      break;
    }
    case AgentKind::kQl: {
      const auto ai = static_cast<Eigen::Index>(a);
      omega.row(ai) = 2.0 * (r - z[ai]) * s.transpose();
      break;
    }
    default:
      throw InvalidInput("exact linear terms exist for pg and ql only");
  }
  return omega;
}

VerificationReport verify_theorem1(AgentKind kind, const NetworkParams& params,
                                   std::span<const Interaction> batch,
                                   double lambda, std::span<const Vector> probes,
                                   const VerifyOptions& options) {
  check_probes(probes);
  if (batch.empty()) throw InvalidInput("verification batch is empty");
  const std::size_t k = params.spec.output_dim;

  Matrix omega_sum = Matrix::Zero(static_cast<Eigen::Index>(k),
                                  static_cast<Eigen::Index>(params.spec.input_dim));
  for (const Interaction& it : batch) {
    omega_sum += omega_theorem1(kind, params, it.state, it.action, it.reward);
  }
  if (options.flip_omega_sign) omega_sum = -omega_sum;
  const double scale = lambda / static_cast<double>(batch.size());

  NetworkParams updated = gradient_step(kind, params, nullptr, batch, lambda);

  VerificationReport rep;
  rep.suite = "thm1";
  rep.agent = to_string(kind);
  rep.lambda = lambda;
  rep.predicted_delta.resize(static_cast<Eigen::Index>(probes.size()),
                             static_cast<Eigen::Index>(k));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    rep.predicted_delta.row(static_cast<Eigen::Index>(p)) =
        (scale * (omega_sum * probes[p])).transpose();
  }
  rep.actual_delta = output_change(params, updated, probes, k);
  rep.residual = max_abs(rep.actual_delta - rep.predicted_delta);
  rep.predicted_norm = max_abs(rep.predicted_delta);
  rep.ratio = std::numeric_limits<double>::quiet_NaN();
  rep.pass = rep.residual <= options.linear_tolerance;
  return rep;
}

Vector omega_theorem2(AgentKind kind, const NetworkParams& params,
                      const NetworkParams* snapshot, const Vector& s,
                      std::size_t a, double r, double clip) {
  const std::size_t k = action_outputs(kind, params);
  if (a >= k) throw InvalidInput("action out of range");
  const auto kk = static_cast<Eigen::Index>(k);
  const auto ai = static_cast<Eigen::Index>(a);
  Vector z = forward(params, s);
  Matrix jac = output_jacobian(params, s);
  switch (kind) {
    case AgentKind::kDqn:
      return 2.0 * (r - z[ai]) * jac.row(ai).transpose();
    case AgentKind::kA2c: {
      Vector coef = score_row(softmax(z.head(kk)), a);
      Vector policy_dir = jac.topRows(kk).transpose() * coef;
      return (r - z[kk]) * (jac.row(kk).transpose() + policy_dir);
    }
    case AgentKind::kPpo: {
      if (snapshot == nullptr) throw InvalidInput("ppo terms need a snapshot");
      Vector z_old = forward(*snapshot, s);
      Vector pi = softmax(z.head(kk));
      Vector pi_old = softmax(z_old.head(kk));
      double ratio = pi[ai] / pi_old[ai];
      double weight = std::abs(1.0 - ratio) < clip ? ratio : 0.0;
      Vector policy_dir = jac.topRows(kk).transpose() * score_row(pi, a);
      // Advantage frozen at the snapshot; the value term uses the current v.
      double advantage = r - z_old[kk];
      return (r - z[kk]) * jac.row(kk).transpose() + advantage * weight * policy_dir;
    }
    default:
      throw InvalidInput("first-order terms exist for a2c, dqn and ppo only");
  }
}

VerificationReport verify_theorem2(AgentKind kind, const NetworkParams& params,
                                   std::span<const Interaction> batch,
                                   double lambda, std::span<const Vector> probes,
                                   double clip, const VerifyOptions& options) {
  check_probes(probes);
  if (batch.empty()) throw InvalidInput("verification batch is empty");
  const std::size_t k = action_outputs(kind, params);
  const NetworkParams* snapshot = kind == AgentKind::kPpo ? &params : nullptr;

  Vector omega_sum = Vector::Zero(params.theta.size());
  for (const Interaction& it : batch) {
    omega_sum += omega_theorem2(kind, params, snapshot, it.state, it.action,
                                it.reward, clip);
  }
  if (options.flip_omega_sign) omega_sum = -omega_sum;
  const double n = static_cast<double>(batch.size());

  Matrix predicted(static_cast<Eigen::Index>(probes.size()), static_cast<Eigen::Index>(k));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    Matrix jac = output_jacobian(params, probes[p]);
    predicted.row(static_cast<Eigen::Index>(p)) =
        (jac.topRows(static_cast<Eigen::Index>(k)) * omega_sum).transpose();
  }

  auto residual_at = [&](double lr, Matrix* actual_out) {
    NetworkParams updated = gradient_step(kind, params, snapshot, batch, lr, clip);
    Matrix actual = output_change(params, updated, probes, k);
    double res = max_abs(actual - (lr / n) * predicted);
    if (actual_out != nullptr) *actual_out = std::move(actual);
    return res;
  };

  VerificationReport rep;
  rep.suite = "thm2";
  rep.agent = to_string(kind);
  rep.lambda = lambda;
  rep.predicted_delta = (lambda / n) * predicted;
  rep.residual = residual_at(lambda, &rep.actual_delta);
  rep.residual_half = residual_at(lambda / 2.0, nullptr);
  rep.predicted_norm = max_abs(rep.predicted_delta);
  rep.ratio = rep.residual_half > 0.0 ? rep.residual / rep.residual_half
                                      : std::numeric_limits<double>::quiet_NaN();

  if (params.spec.linear_in_params()) {
    rep.pass = rep.residual <= options.linear_tolerance &&
               rep.residual_half <= options.linear_tolerance;
    rep.note = "linear in parameters";
  } else if (rep.residual == 0.0 && rep.residual_half == 0.0) {
    rep.pass = true;
    rep.note = "exact";
  } else if (!(rep.residual < options.asymptotic_fraction * rep.predicted_norm)) {
    rep.pass = false;
    rep.note = "step too large for the first-order regime";
  } else {
    rep.pass = rep.ratio >= options.ratio_low && rep.ratio <= options.ratio_high;
  }
  return rep;
}

VerificationReport verify_lemma1(const NetworkParams& params, const Vector& s,
                                 std::size_t a, std::size_t action_count,
                                 const VerifyOptions& options) {
  const std::size_t k = action_count == 0 ? params.spec.output_dim : action_count;
  const auto kk = static_cast<Eigen::Index>(k);
  const auto ai = static_cast<Eigen::Index>(a);
  Vector analytic = policy_gradient(params, s, a, k);

  const double h = options.fd_step;
  Vector numeric(params.theta.size());
  NetworkParams probe = params;
  for (Eigen::Index i = 0; i < probe.theta.size(); ++i) {
    const double orig = probe.theta[i];
    probe.theta[i] = orig + h;
    double plus = softmax(forward(probe, s).head(kk))[ai];
    probe.theta[i] = orig - h;
    double minus = softmax(forward(probe, s).head(kk))[ai];
    probe.theta[i] = orig;
    numeric[i] = (plus - minus) / (2.0 * h);
  }

  VerificationReport rep;
  rep.suite = "lemma1";
  rep.agent = "softmax";
  double err = (analytic - numeric).norm();
  double denom = numeric.norm();
  rep.relative_error = err == 0.0 ? 0.0 : err / std::max(denom, 1e-300);
  rep.residual = err;
  rep.predicted_norm = analytic.norm();
  rep.ratio = std::numeric_limits<double>::quiet_NaN();
  rep.pass = rep.relative_error <= options.lemma1_tolerance;
  return rep;
}

}  // namespace entropy_lab

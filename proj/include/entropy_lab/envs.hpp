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

#ifndef ENTROPY_LAB_ENVS_HPP_
#define ENTROPY_LAB_ENVS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <string>
#include <vector>

#include "entropy_lab/idx.hpp"
#include "entropy_lab/numerics.hpp"
#include "entropy_lab/rng.hpp"

namespace entropy_lab {

// A context served by an environment. `tag` carries ground truth when the
// environment has one (the image label, the preference model's best
// action) and is -1 otherwise. Agents only ever see `features`.
struct State {
  Vector features;
  int tag = -1;
};

class ContextualBandit {
 public:
  virtual ~ContextualBandit() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t action_count() const = 0;

  // Draws a training context from the state-sampling stream.
  virtual State sample_state(Rng& rng) const = 0;

  // Reward for acting `a` in `s`. Stochastic environments draw from
  // `reward_rng`; deterministic ones ignore it.
  virtual double reward(const State& s, std::size_t a, Rng& reward_rng) const = 0;

  // True when reward(s, a) does not depend on the stream, so the policy
  // value can be computed as an exact expectation over actions.
  virtual bool deterministic_rewards() const = 0;

  // Fixed before training and never mutated.
  const std::vector<State>& eval_set() const { return eval_set_; }

 protected:
  void check_action(std::size_t a) const;

  std::vector<State> eval_set_;
};

// --- image classification -------------------------------------------------

enum class ClassificationReward {
  kSigned,  // 1 for the right label, -1/9 otherwise; uniform policy scores 0
  kBinary,  // 1 for the right label, 0 otherwise
};

// 1 if a == label, -1/(K-1) otherwise (-1/9 for ten classes).
double classification_reward(int label, std::size_t a, std::size_t k = 10);

class ClassificationBandit : public ContextualBandit {
 public:
  // Training states are drawn uniformly from `train`; the eval set is the
  // first `eval_size` images of `eval` (all of them when eval_size == 0).
  ClassificationBandit(std::shared_ptr<const LabeledImageSet> train,
                       std::shared_ptr<const LabeledImageSet> eval,
                       std::size_t eval_size, ClassificationReward mode,
                       std::size_t classes = 10);

  std::string kind() const override { return "classification"; }
  std::size_t state_dim() const override { return train_->dim(); }
  std::size_t action_count() const override { return classes_; }
  State sample_state(Rng& rng) const override;
  double reward(const State& s, std::size_t a, Rng& reward_rng) const override;
  bool deterministic_rewards() const override { return true; }

  ClassificationReward mode() const { return mode_; }

 private:
  std::shared_ptr<const LabeledImageSet> train_;
  std::size_t classes_;
  ClassificationReward mode_;
};

// --- music recommendation ---------------------------------------------------

// Genre and track audio features. Rewards use the column-mean-normalized
// copies, so shifting any raw feature column by a constant has no effect.
class GenreModel {
 public:
  GenreModel(Matrix genre_features, Matrix track_features, double epsilon = 0.1);

  std::size_t genre_count() const { return static_cast<std::size_t>(genre_raw_.rows()); }
  std::size_t track_count() const { return static_cast<std::size_t>(track_raw_.rows()); }
  double epsilon() const { return epsilon_; }
  const Matrix& genre_features() const { return genre_raw_; }
  const Matrix& track_features() const { return track_raw_; }

  // p(s, a) = s^T * F_S * F_a with normalized features.
  double preference(const Vector& s, std::size_t a) const;

 private:
  Matrix genre_raw_;
  Matrix track_raw_;
  Matrix genre_norm_;
  Matrix track_norm_;
  double epsilon_;
};

// -1, 0 or 1 depending on where p(s, a) falls relative to +-epsilon.
double genre_reward(const GenreModel& model, const Vector& s, std::size_t a);

// Binary preference vector with between 1 and 5 genres set (never more
// than `genres`), positions uniform without replacement.
Vector genre_sample_state(Rng& rng, std::size_t genres = 20);

struct FeatureTable {
  std::vector<std::string> names;
  Matrix values;
};

// CSV with header `name,f1,...,fF`; one row per item, values in [0, 1].
FeatureTable parse_feature_csv(std::istream& in, const std::string& source);
FeatureTable load_feature_csv(const std::filesystem::path& path);

// Uniform [0, 1] features, used when no CSV is supplied.
Matrix random_features(std::size_t rows, std::size_t cols, Rng& rng);

class GenreBandit : public ContextualBandit {
 public:
  GenreBandit(GenreModel model, std::size_t eval_size, Rng& init_rng);

  std::string kind() const override { return "genre"; }
  std::size_t state_dim() const override { return model_.genre_count(); }
  std::size_t action_count() const override { return model_.track_count(); }
  State sample_state(Rng& rng) const override;
  double reward(const State& s, std::size_t a, Rng& reward_rng) const override;
  bool deterministic_rewards() const override { return true; }

  const GenreModel& model() const { return model_; }

 private:
  GenreModel model_;
};

// --- online advertisement ---------------------------------------------------

// Logistic click model. A user s first reorders the catalogue by the
// scores ordering * s (descending, ties by index); action a then shows the
// product at position a of that order, which is clicked with probability
// sigmoid(beta * <s, q_product>).
class ClickModel {
 public:
  ClickModel(Matrix product_embeddings, Matrix ordering, double beta);

  // K products with N(0, 1/d) embeddings and an N(0, 1) ordering matrix.
  static ClickModel random(std::size_t products, std::size_t dim, double beta,
                           Rng& rng);

  std::size_t product_count() const { return static_cast<std::size_t>(embeddings_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(embeddings_.cols()); }
  double beta() const { return beta_; }
  const Matrix& embeddings() const { return embeddings_; }

  // position -> product for this user.
  std::vector<std::size_t> permutation(const Vector& s) const;
  double logit(const Vector& s, std::size_t a) const;
  double click_probability(const Vector& s, std::size_t a) const;

 private:
  Matrix embeddings_;
  Matrix ordering_;
  double beta_;
};

// Bernoulli(click_probability(s, a)) drawn from `rng`.
double click_reward(const ClickModel& model, const Vector& s, std::size_t a,
                    Rng& rng);

class ClickBandit : public ContextualBandit {
 public:
  ClickBandit(ClickModel model, std::size_t eval_size, Rng& init_rng);

  std::string kind() const override { return "click"; }
  std::size_t state_dim() const override { return model_.dim(); }
  std::size_t action_count() const override { return model_.product_count(); }
  State sample_state(Rng& rng) const override;
  double reward(const State& s, std::size_t a, Rng& reward_rng) const override;
  bool deterministic_rewards() const override { return false; }

  const ClickModel& model() const { return model_; }

 private:
  ClickModel model_;
};

// --- behavioral preference --------------------------------------------------

// Reward is the cosine similarity between the user and the action's
// prototype plus optional N(0, noise^2) noise.
class PreferenceModel {
 public:
  PreferenceModel(Matrix prototypes, double noise_scale);

  static PreferenceModel random(std::size_t actions, std::size_t dim,
                                double noise_scale, Rng& rng);

  std::size_t action_count() const { return static_cast<std::size_t>(prototypes_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(prototypes_.cols()); }
  double noise_scale() const { return noise_; }
  const Matrix& prototypes() const { return prototypes_; }

  double similarity(const Vector& s, std::size_t a) const;
  // Noise-free best action, computed with one product against the
  // row-normalized prototype matrix.
  std::size_t best_action(const Vector& s) const;

 private:
  Matrix prototypes_;
  Matrix unit_prototypes_;
  double noise_;
};

double preference_reward(const PreferenceModel& model, const Vector& s,
                         std::size_t a, Rng& rng);

class PreferenceBandit : public ContextualBandit {
 public:
  PreferenceBandit(PreferenceModel model, std::size_t eval_size, Rng& init_rng);

  std::string kind() const override { return "preference"; }
  std::size_t state_dim() const override { return model_.dim(); }
  std::size_t action_count() const override { return model_.action_count(); }
  State sample_state(Rng& rng) const override;
  double reward(const State& s, std::size_t a, Rng& reward_rng) const override;
  bool deterministic_rewards() const override { return model_.noise_scale() == 0.0; }

  const PreferenceModel& model() const { return model_; }

 private:
  PreferenceModel model_;
};

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_ENVS_HPP_

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

#include "entropy_lab/envs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "entropy_lab/error.hpp"

namespace entropy_lab {

namespace {

Matrix column_centered(const Matrix& m) {
  Matrix out = m;
  if (m.rows() == 0) return out;
  Eigen::RowVectorXd mean = m.colwise().mean();
  out.rowwise() -= mean;
  return out;
}

void check_unit_interval(const Matrix& m, const char* what) {
  if (!m.allFinite() || (m.size() > 0 && (m.minCoeff() < 0.0 || m.maxCoeff() > 1.0))) {
    throw InvalidInput(std::string(what) + " entries must lie in [0, 1]");
  }
}

// Comma-separated cells; a cell may be double-quoted, with "" for a quote
// inside it (track names often contain commas).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

Vector gaussian_vector(std::size_t dim, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = standard_normal(rng);
  return v;
}

}  // namespace

void ContextualBandit::check_action(std::size_t a) const {
  if (a >= action_count()) {
    throw InvalidInput("action " + std::to_string(a) + " out of range [0, " +
                       std::to_string(action_count()) + ")");
  }
}

// --- classification ---------------------------------------------------------

double classification_reward(int label, std::size_t a, std::size_t k) {
  if (k < 2) throw InvalidInput("classification needs at least two classes");
  if (a >= k) {
    throw InvalidInput("action " + std::to_string(a) + " out of range");
  }
  if (label < 0 || static_cast<std::size_t>(label) >= k) {
    throw InvalidInput("label " + std::to_string(label) + " out of range");
  }
  return static_cast<std::size_t>(label) == a
             ? 1.0
             : -1.0 / static_cast<double>(k - 1);
}

ClassificationBandit::ClassificationBandit(
    std::shared_ptr<const LabeledImageSet> train,
    std::shared_ptr<const LabeledImageSet> eval, std::size_t eval_size,
    ClassificationReward mode, std::size_t classes)
    : train_(std::move(train)), classes_(classes), mode_(mode) {
  if (!train_ || train_->size() == 0) throw InvalidInput("empty training set");
  if (!eval || eval->size() == 0) throw InvalidInput("empty evaluation set");
  if (eval->dim() != train_->dim()) {
    throw InvalidInput("training and evaluation images differ in size");
  }
  auto check_labels = [&](const LabeledImageSet& set) {
    for (int l : set.labels) {
      if (l < 0 || static_cast<std::size_t>(l) >= classes_) {
        throw InvalidInput("label " + std::to_string(l) + " outside [0, " +
                           std::to_string(classes_) + ")");
      }
    }
  };
  check_labels(*train_);
  check_labels(*eval);
  std::size_t n = eval_size == 0 ? eval->size() : std::min(eval_size, eval->size());
  eval_set_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    eval_set_.push_back(State{eval->images[i], eval->labels[i]});
  }
}

State ClassificationBandit::sample_state(Rng& rng) const {
  std::size_t i = uniform_index(rng, train_->size());
  return State{train_->images[i], train_->labels[i]};
}

double ClassificationBandit::reward(const State& s, std::size_t a, Rng&) const {
  check_action(a);
  if (mode_ == ClassificationReward::kBinary) {
    return static_cast<std::size_t>(s.tag) == a ? 1.0 : 0.0;
  }
  return classification_reward(s.tag, a, classes_);
}

// --- genre ------------------------------------------------------------------

GenreModel::GenreModel(Matrix genre_features, Matrix track_features,
                       double epsilon)
    : genre_raw_(std::move(genre_features)),
      track_raw_(std::move(track_features)),
      epsilon_(epsilon) {
  if (genre_raw_.rows() == 0 || track_raw_.rows() == 0) {
    throw InvalidInput("genre model needs at least one genre and one track");
  }
  if (genre_raw_.cols() != track_raw_.cols()) {
    throw InvalidInput("genre and track feature counts differ");
  }
  if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) {
    throw InvalidInput("feedback threshold must be finite and >= 0");
  }
  check_unit_interval(genre_raw_, "genre feature");
  check_unit_interval(track_raw_, "track feature");
  genre_norm_ = column_centered(genre_raw_);
  track_norm_ = column_centered(track_raw_);
}

double GenreModel::preference(const Vector& s, std::size_t a) const {
  if (s.size() != genre_raw_.rows()) {
    throw InvalidInput("genre state has wrong dimension");
  }
  if (a >= track_count()) {
    throw InvalidInput("track " + std::to_string(a) + " out of range");
  }
  Eigen::RowVectorXd profile = s.transpose() * genre_norm_;
  return profile.dot(track_norm_.row(static_cast<Eigen::Index>(a)));
}

double genre_reward(const GenreModel& model, const Vector& s, std::size_t a) {
  double p = model.preference(s, a);
  if (p < -model.epsilon()) return -1.0;
  if (p > model.epsilon()) return 1.0;
  return 0.0;
}

Vector genre_sample_state(Rng& rng, std::size_t genres) {
  if (genres == 0) throw InvalidInput("need at least one genre");
  std::size_t n = 1 + uniform_index(rng, std::min<std::size_t>(5, genres));
  std::vector<std::size_t> idx(genres);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first n slots are a uniform n-subset.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + uniform_index(rng, genres - i);
    std::swap(idx[i], idx[j]);
  }
  Vector s = Vector::Zero(static_cast<Eigen::Index>(genres));
  for (std::size_t i = 0; i < n; ++i) s[static_cast<Eigen::Index>(idx[i])] = 1.0;
  return s;
}

FeatureTable parse_feature_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(source + ".header", 1, "empty feature CSV");
  }
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB &&
      static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "name") {
    throw FormatError(source + ".header", 1,
                      "header must be name,f1,...,fF");
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] != "f" + std::to_string(c)) {
      throw FormatError(source + ".header", 1,
                        "column " + std::to_string(c) + " must be named f" +
                            std::to_string(c));
    }
  }
  const std::size_t features = header.size() - 1;
  FeatureTable table;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw FormatError(source + ".row", line_no,
                        "expected " + std::to_string(header.size()) +
                            " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> values(features);
    for (std::size_t c = 0; c < features; ++c) {
      const std::string& cell = cells[c + 1];
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
        throw FormatError(source + "." + header[c + 1], line_no,
                          "'" + cell + "' is not a decimal number");
      }
      if (v < 0.0 || v > 1.0) {
        throw FormatError(source + "." + header[c + 1], line_no,
                          "value " + cell + " outside [0, 1]");
      }
      values[c] = v;
    }
    table.names.push_back(cells[0]);
    rows.push_back(std::move(values));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(features));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < features; ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

FeatureTable load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_feature_csv(in, path.filename().string());
}

Matrix random_features(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = uniform01(rng);
  }
  return m;
}

GenreBandit::GenreBandit(GenreModel model, std::size_t eval_size, Rng& init_rng)
    : model_(std::move(model)) {
  eval_set_.reserve(eval_size);
  for (std::size_t i = 0; i < eval_size; ++i) eval_set_.push_back(sample_state(init_rng));
}

State GenreBandit::sample_state(Rng& rng) const {
  return State{genre_sample_state(rng, model_.genre_count()), -1};
}

double GenreBandit::reward(const State& s, std::size_t a, Rng&) const {
  check_action(a);
  return genre_reward(model_, s.features, a);
}

// --- click ------------------------------------------------------------------

ClickModel::ClickModel(Matrix product_embeddings, Matrix ordering, double beta)
    : embeddings_(std::move(product_embeddings)),
      ordering_(std::move(ordering)),
      beta_(beta) {
  if (embeddings_.rows() == 0 || embeddings_.cols() == 0) {
    throw InvalidInput("click model needs products and a positive dimension");
  }
  if (ordering_.rows() != embeddings_.rows() || ordering_.cols() != embeddings_.cols()) {
    throw InvalidInput("ordering matrix must match the embedding shape");
  }
  if (!embeddings_.allFinite() || !ordering_.allFinite()) {
    throw InvalidInput("click model parameters must be finite");
  }
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
    throw InvalidInput("click temperature must be finite and >= 0");
  }
}

ClickModel ClickModel::random(std::size_t products, std::size_t dim, double beta,
                              Rng& rng) {
  Matrix q(static_cast<Eigen::Index>(products), static_cast<Eigen::Index>(dim));
  Matrix order(static_cast<Eigen::Index>(products), static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index r = 0; r < q.rows(); ++r) {
    for (Eigen::Index c = 0; c < q.cols(); ++c) q(r, c) = scale * standard_normal(rng);
  }
  for (Eigen::Index r = 0; r < order.rows(); ++r) {
    for (Eigen::Index c = 0; c < order.cols(); ++c) order(r, c) = standard_normal(rng);
  }
  return ClickModel(std::move(q), std::move(order), beta);
}

std::vector<std::size_t> ClickModel::permutation(const Vector& s) const {
  if (s.size() != embeddings_.cols()) {
    throw InvalidInput("user vector has wrong dimension");
  }
  Vector scores = ordering_ * s;
  std::vector<std::size_t> order(product_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return scores[static_cast<Eigen::Index>(x)] > scores[static_cast<Eigen::Index>(y)];
  });
  return order;
}

double ClickModel::logit(const Vector& s, std::size_t a) const {
  if (a >= product_count()) {
    throw InvalidInput("product " + std::to_string(a) + " out of range");
  }
  std::size_t product = permutation(s)[a];
  return beta_ * s.dot(embeddings_.row(static_cast<Eigen::Index>(product)).transpose());
}

double ClickModel::click_probability(const Vector& s, std::size_t a) const {
  double x = logit(s, a);
  // Evaluated on the side that cannot overflow.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double click_reward(const ClickModel& model, const Vector& s, std::size_t a,
                    Rng& rng) {
  double p = model.click_probability(s, a);
  return uniform01(rng) < p ? 1.0 : 0.0;
}

ClickBandit::ClickBandit(ClickModel model, std::size_t eval_size, Rng& init_rng)
    : model_(std::move(model)) {
  eval_set_.reserve(eval_size);
  for (std::size_t i = 0; i < eval_size; ++i) eval_set_.push_back(sample_state(init_rng));
}

State ClickBandit::sample_state(Rng& rng) const {
  return State{gaussian_vector(model_.dim(), rng), -1};
}

double ClickBandit::reward(const State& s, std::size_t a, Rng& reward_rng) const {
  check_action(a);
  return click_reward(model_, s.features, a, reward_rng);
}

// --- preference -------------------------------------------------------------

PreferenceModel::PreferenceModel(Matrix prototypes, double noise_scale)
    : prototypes_(std::move(prototypes)), noise_(noise_scale) {
  if (prototypes_.rows() == 0 || prototypes_.cols() == 0) {
    throw InvalidInput("preference model needs actions and a positive dimension");
  }
  if (!prototypes_.allFinite()) throw InvalidInput("prototypes must be finite");
  if (!(noise_ >= 0.0) || !std::isfinite(noise_)) {
    throw InvalidInput("noise scale must be finite and >= 0");
  }
  unit_prototypes_ = prototypes_;
  for (Eigen::Index r = 0; r < unit_prototypes_.rows(); ++r) {
    double n = unit_prototypes_.row(r).norm();
    if (n == 0.0) throw InvalidInput("prototype rows must be nonzero");
    unit_prototypes_.row(r) /= n;
  }
}

PreferenceModel PreferenceModel::random(std::size_t actions, std::size_t dim,
                                        double noise_scale, Rng& rng) {
  Matrix p(static_cast<Eigen::Index>(actions), static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) p(r, c) = standard_normal(rng);
  }
  return PreferenceModel(std::move(p), noise_scale);
}

double PreferenceModel::similarity(const Vector& s, std::size_t a) const {
  if (s.size() != prototypes_.cols()) {
    throw InvalidInput("user vector has wrong dimension");
  }
  if (a >= action_count()) {
    throw InvalidInput("action " + std::to_string(a) + " out of range");
  }
  Vector p = prototypes_.row(static_cast<Eigen::Index>(a)).transpose();
  double denom = s.norm() * p.norm();
  if (denom == 0.0) return 0.0;
  return s.dot(p) / denom;
}

std::size_t PreferenceModel::best_action(const Vector& s) const {
  if (s.size() != prototypes_.cols()) {
    throw InvalidInput("user vector has wrong dimension");
  }
  Vector scores = unit_prototypes_ * s;
  Eigen::Index best = 0;
  scores.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

double preference_reward(const PreferenceModel& model, const Vector& s,
                         std::size_t a, Rng& rng) {
  double r = model.similarity(s, a);
  if (model.noise_scale() > 0.0) r += model.noise_scale() * standard_normal(rng);
  return r;
}

PreferenceBandit::PreferenceBandit(PreferenceModel model, std::size_t eval_size,
                                   Rng& init_rng)
    : model_(std::move(model)) {
  eval_set_.reserve(eval_size);
  for (std::size_t i = 0; i < eval_size; ++i) eval_set_.push_back(sample_state(init_rng));
}

State PreferenceBandit::sample_state(Rng& rng) const {
  Vector s = gaussian_vector(model_.dim(), rng);
  int best = static_cast<int>(model_.best_action(s));
  return State{std::move(s), best};
}

double PreferenceBandit::reward(const State& s, std::size_t a, Rng& reward_rng) const {
  check_action(a);
  return preference_reward(model_, s.features, a, reward_rng);
}

}  // namespace entropy_lab

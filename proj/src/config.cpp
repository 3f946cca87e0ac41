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

#include "entropy_lab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "entropy_lab/error.hpp"

namespace entropy_lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads fields from one JSON object, remembering which keys were used so
// that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string field_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    if (!obj_.contains(key)) throw ConfigError(field_path(key), "required field is missing");
    used_.insert(key);
    return obj_.at(key);
  }

  const json* optional_raw(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = {}) {
    const json* v = optional_raw(key);
    if (v == nullptr) return require(key, fallback);
    if (!v->is_string()) throw ConfigError(field_path(key), "expected a string");
    return v->get<std::string>();
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = {}) {
    const json* v = optional_raw(key);
    if (v == nullptr) return require(key, fallback);
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      throw ConfigError(field_path(key), "expected a non-negative integer");
    }
    return v->get<std::size_t>();
  }

  double number(const std::string& key, std::optional<double> fallback = {}) {
    const json* v = optional_raw(key);
    if (v == nullptr) return require(key, fallback);
    if (!v->is_number()) throw ConfigError(field_path(key), "expected a number");
    double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(field_path(key), "must be finite");
    return d;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = optional_raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(field_path(key), "expected true or false");
    return v->get<bool>();
  }

  std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> fallback) {
    const json* v = optional_raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_array()) throw ConfigError(field_path(key), "expected an array");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        throw ConfigError(field_path(key) + "[" + std::to_string(i) + "]",
                          "expected a non-negative integer");
      }
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(field_path(it.key()), "unknown key");
    }
  }

 private:
  template <class T>
  T require(const std::string& key, const std::optional<T>& fallback) const {
    if (!fallback) throw ConfigError(field_path(key), "required field is missing");
    return *fallback;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

fs::path existing_file(ObjectReader& r, const std::string& key, const fs::path& base) {
  fs::path p = r.string(key);
  if (p.is_relative()) p = base / p;
  if (!fs::is_regular_file(p)) {
    throw ConfigError(r.field_path(key), "file not found: " + p.string());
  }
  return p;
}

EnvConfig parse_env(const json& doc, const fs::path& base) {
  ObjectReader r(doc, "env");
  std::string kind = r.string("kind");
  EnvConfig env;
  if (kind == "classification") {
    ClassificationEnvConfig c;
    c.train_images = existing_file(r, "train_images", base);
    c.train_labels = existing_file(r, "train_labels", base);
    c.eval_images = existing_file(r, "eval_images", base);
    c.eval_labels = existing_file(r, "eval_labels", base);
    c.train_size = r.count("train_size", c.train_size);
    c.classes = r.count("classes", c.classes);
    if (c.classes < 2) throw ConfigError(r.field_path("classes"), "must be >= 2");
    std::string reward = r.string("reward", "signed");
    if (reward == "signed") {
      c.reward = ClassificationReward::kSigned;
    } else if (reward == "binary") {
      c.reward = ClassificationReward::kBinary;
    } else {
      throw ConfigError(r.field_path("reward"), "expected \"signed\" or \"binary\"");
    }
    env = c;
  } else if (kind == "genre") {
    GenreEnvConfig c;
    if (r.has("genre_csv")) c.genre_csv = existing_file(r, "genre_csv", base);
    if (r.has("track_csv")) c.track_csv = existing_file(r, "track_csv", base);
    c.genres = r.count("genres", c.genres);
    c.features = r.count("features", c.features);
    c.tracks = r.count("tracks", c.tracks);
    c.epsilon = r.number("epsilon", c.epsilon);
    if (c.genres == 0 || c.features == 0 || c.tracks == 0) {
      throw ConfigError("env", "genres, features and tracks must be >= 1");
    }
    if (c.epsilon < 0.0) throw ConfigError(r.field_path("epsilon"), "must be >= 0");
    env = c;
  } else if (kind == "click") {
    ClickEnvConfig c;
    c.products = r.count("products", c.products);
    c.dim = r.count("dim", c.dim);
    c.beta = r.number("beta", c.beta);
    if (c.products == 0 || c.dim == 0) throw ConfigError("env", "products and dim must be >= 1");
    if (c.beta < 0.0) throw ConfigError(r.field_path("beta"), "must be >= 0");
    env = c;
  } else if (kind == "preference") {
    PreferenceEnvConfig c;
    c.actions = r.count("actions", c.actions);
    c.dim = r.count("dim", c.dim);
    c.noise = r.number("noise", c.noise);
    if (c.actions == 0 || c.dim == 0) throw ConfigError("env", "actions and dim must be >= 1");
    if (c.noise < 0.0) throw ConfigError(r.field_path("noise"), "must be >= 0");
    env = c;
  } else {
    throw ConfigError(r.field_path("kind"), "unknown environment '" + kind + "'");
  }
  r.finish();
  return env;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char ch : name) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
              (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return name != "." && name != "..";
}

}  // namespace

std::string env_kind(const EnvConfig& env) {
  struct {
    std::string operator()(const ClassificationEnvConfig&) const { return "classification"; }
    std::string operator()(const GenreEnvConfig&) const { return "genre"; }
    std::string operator()(const ClickEnvConfig&) const { return "click"; }
    std::string operator()(const PreferenceEnvConfig&) const { return "preference"; }
  } visitor;
  return std::visit(visitor, env);
}

AgentConfig parse_agent_config(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  AgentConfig a;
  try {
    a.kind = agent_kind_from_string(r.string("kind"));
  } catch (const InvalidInput& e) {
    throw ConfigError(r.field_path("kind"), e.what());
  }
  a.name = r.string("name", to_string(a.kind));
  if (!valid_name(a.name)) {
    throw ConfigError(r.field_path("name"), "names may use letters, digits, '_', '-', '.'");
  }
  a.hidden = r.counts("hidden", {});
  if (r.has("activation")) {
    try {
      a.activation = activation_from_string(r.string("activation"));
    } catch (const InvalidInput& e) {
      throw ConfigError(r.field_path("activation"), e.what());
    }
  }
  a.bias = r.boolean("bias", a.bias);
  std::string init = r.string("init", "uniform");
  if (init == "uniform") {
    a.init = InitScheme::kUniform;
  } else if (init == "zeros") {
    a.init = InitScheme::kZeros;
  } else {
    throw ConfigError(r.field_path("init"), "expected \"uniform\" or \"zeros\"");
  }
  auto check = [&](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(r.field_path(key), what);
  };
  a.lr = r.number("lr", a.lr);
  check(a.lr > 0.0, "lr", "must be > 0");
  a.batch_size = r.count("batch_size", a.batch_size);
  check(a.batch_size >= 1, "batch_size", "must be >= 1");
  a.ppo_clip = r.number("ppo_clip", a.ppo_clip);
  check(a.ppo_clip > 0.0 && a.ppo_clip < 1.0, "ppo_clip", "must lie in (0, 1)");
  a.ppo_epochs = r.count("ppo_epochs", a.ppo_epochs);
  check(a.ppo_epochs >= 1, "ppo_epochs", "must be >= 1");
  if (const json* eps = r.optional_raw("dqn_epsilon")) {
    ObjectReader er(*eps, r.field_path("dqn_epsilon"));
    a.dqn_epsilon.start = er.number("start", a.dqn_epsilon.start);
    a.dqn_epsilon.end = er.number("end", a.dqn_epsilon.end);
    a.dqn_epsilon.fraction = er.number("fraction", a.dqn_epsilon.fraction);
    er.finish();
  }
  a.dqn_buffer_capacity = r.count("dqn_buffer_capacity", a.dqn_buffer_capacity);
  a.ql_epsilon = r.number("ql_epsilon", a.ql_epsilon);
  check(a.ql_epsilon >= 0.0 && a.ql_epsilon <= 1.0, "ql_epsilon", "must lie in [0, 1]");
  a.normalize_advantage = r.boolean("normalize_advantage", a.normalize_advantage);
  r.finish();
  try {
    a.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(path, e.what());
  }
  return a;
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  ObjectReader r(doc, "");
  RunConfig c;
  c.name = r.string("name", c.name);
  c.env = parse_env(r.raw("env"), base_dir);

  const json& agents = r.raw("agents");
  if (!agents.is_array() || agents.empty()) {
    throw ConfigError("agents", "expected a nonempty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    std::string path = "agents[" + std::to_string(i) + "]";
    AgentConfig a = parse_agent_config(agents[i], path);
    if (!names.insert(a.name).second) {
      throw ConfigError(path + ".name", "duplicate agent name '" + a.name + "'");
    }
    c.agents.push_back(std::move(a));
  }

  c.total_interactions = r.count("total_interactions", c.total_interactions);
  c.eval_every = r.count("eval_every", c.eval_every);
  if (c.eval_every == 0) throw ConfigError("eval_every", "must be >= 1");
  c.eval_size = r.count("eval_size", c.eval_size);
  if (c.eval_size == 0) throw ConfigError("eval_size", "must be >= 1");

  const json& seeds = r.raw("seeds");
  if (!seeds.is_array() || seeds.empty()) {
    throw ConfigError("seeds", "expected a nonempty array of integers");
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds[i].is_number_integer() || seeds[i].get<long long>() < 0) {
      throw ConfigError("seeds[" + std::to_string(i) + "]",
                        "expected a non-negative integer");
    }
    c.seeds.push_back(seeds[i].get<std::uint64_t>());
  }
  c.output_dir = r.string("output_dir", c.output_dir.string());
  r.finish();
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

json to_json(const AgentConfig& a) {
  json j;
  j["name"] = a.name;
  j["kind"] = to_string(a.kind);
  j["hidden"] = a.hidden;
  j["activation"] = to_string(a.resolved_activation());
  j["bias"] = a.bias;
  j["init"] = a.init == InitScheme::kZeros ? "zeros" : "uniform";
  j["lr"] = a.lr;
  j["batch_size"] = a.batch_size;
  if (a.kind == AgentKind::kPpo) {
    j["ppo_clip"] = a.ppo_clip;
    j["ppo_epochs"] = a.ppo_epochs;
  }
  if (a.kind == AgentKind::kDqn) {
    j["dqn_epsilon"] = {{"start", a.dqn_epsilon.start},
                        {"end", a.dqn_epsilon.end},
                        {"fraction", a.dqn_epsilon.fraction}};
    j["dqn_buffer_capacity"] = a.dqn_buffer_capacity;
  }
  if (a.kind == AgentKind::kQl) j["ql_epsilon"] = a.ql_epsilon;
  if (has_value_head(a.kind)) j["normalize_advantage"] = a.normalize_advantage;
  return j;
}

json to_json(const RunConfig& c) {
  json env;
  env["kind"] = env_kind(c.env);
  if (const auto* e = std::get_if<ClassificationEnvConfig>(&c.env)) {
    // File names only, so outputs do not depend on where the repo lives.
    env["train_images"] = e->train_images.filename().string();
    env["eval_images"] = e->eval_images.filename().string();
    env["train_size"] = e->train_size;
    env["reward"] = e->reward == ClassificationReward::kBinary ? "binary" : "signed";
    env["classes"] = e->classes;
  } else if (const auto* e = std::get_if<GenreEnvConfig>(&c.env)) {
    env["genre_csv"] = e->genre_csv ? e->genre_csv->filename().string() : "generated";
    env["track_csv"] = e->track_csv ? e->track_csv->filename().string() : "generated";
    env["genres"] = e->genres;
    env["features"] = e->features;
    env["tracks"] = e->tracks;
    env["epsilon"] = e->epsilon;
  } else if (const auto* e = std::get_if<ClickEnvConfig>(&c.env)) {
    env["products"] = e->products;
    env["dim"] = e->dim;
    env["beta"] = e->beta;
  } else if (const auto* e = std::get_if<PreferenceEnvConfig>(&c.env)) {
    env["actions"] = e->actions;
    env["dim"] = e->dim;
    env["noise"] = e->noise;
  }
  json j;
  j["name"] = c.name;
  j["env"] = env;
  j["agents"] = json::array();
  for (const auto& a : c.agents) j["agents"].push_back(to_json(a));
  j["total_interactions"] = c.total_interactions;
  j["eval_every"] = c.eval_every;
  j["eval_size"] = c.eval_size;
  j["seeds"] = c.seeds;
  return j;
}

}  // namespace entropy_lab

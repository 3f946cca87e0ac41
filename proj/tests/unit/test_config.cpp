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

#include <string>

#include "doctest.h"
#include "entropy_lab/config.hpp"
#include "entropy_lab/error.hpp"
#include "support/temp_dir.hpp"

using namespace entropy_lab;
using nlohmann::json;

namespace {

json base_doc() {
  return json::parse(R"({
    "name": "t",
    "env": {"kind": "preference", "actions": 5, "dim": 3},
    "agents": [{"kind": "pg"}, {"kind": "ql", "lr": 0.01}],
    "total_interactions": 100,
    "eval_every": 10,
    "eval_size": 20,
    "seeds": [0, 1]
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_run_config(doc, ".");
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("a valid config parses with defaults filled in") {
  auto c = parse_run_config(base_doc(), ".");
  CHECK(env_kind(c.env) == "preference");
  REQUIRE(c.agents.size() == 2);
  CHECK(c.agents[0].name == "pg");
  CHECK(c.agents[1].name == "ql");
  CHECK(c.agents[1].lr == 0.01);
  CHECK(c.seeds == std::vector<std::uint64_t>{0, 1});
  auto& pref = std::get<PreferenceEnvConfig>(c.env);
  CHECK(pref.actions == 5);
  CHECK(pref.noise == 0.0);
  // Round trip through to_json.
  auto again = parse_run_config(to_json(c), ".");
  CHECK(to_json(again) == to_json(c));
}

TEST_CASE("errors name the offending field") {
  json d = base_doc();
  d["agents"][1]["lrr"] = 0.1;
  CHECK(error_path(d) == "agents[1].lrr");

  d = base_doc();
  d["agents"][1]["lr"] = -1;
  CHECK(error_path(d) == "agents[1].lr");

  d = base_doc();
  d["agents"][0]["kind"] = "sarsa";
  CHECK(error_path(d) == "agents[0].kind");

  d = base_doc();
  d["eval_every"] = 0;
  CHECK(error_path(d) == "eval_every");

  d = base_doc();
  d["seeds"] = json::array();
  CHECK(error_path(d) == "seeds");

  d = base_doc();
  d["seeds"] = {1, -2};
  CHECK(error_path(d).rfind("seeds", 0) == 0);

  d = base_doc();
  d["env"]["kind"] = "maze";
  CHECK(error_path(d) == "env.kind");

  d = base_doc();
  d["total_interactions"] = "lots";
  CHECK(error_path(d) == "total_interactions");

  d = base_doc();
  d["agents"][1]["name"] = "pg";
  CHECK(error_path(d).rfind("agents[1]", 0) == 0);

  d = base_doc();
  d.erase("agents");
  CHECK(error_path(d) == "agents");
}

TEST_CASE("zero interactions is allowed") {
  json d = base_doc();
  d["total_interactions"] = 0;
  CHECK(parse_run_config(d, ".").total_interactions == 0);
}

TEST_CASE("classification paths resolve against the config directory") {
  testing::TempDir dir("config");
  for (const char* f : {"a.idx", "b.idx", "c.idx", "d.idx"}) testing::spit(dir.path() / f, "x");
  json d = base_doc();
  d["env"] = {{"kind", "classification"}, {"train_images", "a.idx"},
              {"train_labels", "b.idx"},  {"eval_images", "c.idx"},
              {"eval_labels", "d.idx"},   {"reward", "binary"}};
  testing::spit(dir.path() / "run.json", d.dump());
  auto c = load_run_config(dir.path() / "run.json");
  auto& cls = std::get<ClassificationEnvConfig>(c.env);
  CHECK(cls.train_images == dir.path() / "a.idx");
  CHECK(cls.reward == ClassificationReward::kBinary);

  d["env"]["eval_labels"] = "missing.idx";
  testing::spit(dir.path() / "run.json", d.dump());
  try {
    load_run_config(dir.path() / "run.json");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "env.eval_labels");
  }
}

TEST_CASE("malformed files are reported") {
  testing::TempDir dir("config_bad");
  testing::spit(dir.path() / "bad.json", "{\"name\": ");
  CHECK_THROWS_AS(load_run_config(dir.path() / "bad.json"), ConfigError);
  CHECK_THROWS(load_run_config(dir.path() / "nope.json"));
}

TEST_CASE("bundled configs parse") {
  const std::filesystem::path root = ENTROPY_LAB_SOURCE_DIR;
  for (const char* name : {"sample_mnist.json", "mnist_classification.json", "genre.json",
                           "click.json", "preference.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_run_config(root / "configs" / name));
  }
}

}  // TEST_SUITE

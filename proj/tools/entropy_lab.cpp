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

// entropy_lab command-line interface.
//
//   entropy_lab run --config <path> [--seed-offset N] [--out DIR]
//   entropy_lab verify [--suite lemma1|thm1|thm2|all] [--lambda L] [--out FILE]
//   entropy_lab report --input <dir> --out <dir>
//
// Exit status: 0 on success, 1 when a verification check fails or a run
// aborts, 2 for bad arguments or configuration.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "entropy_lab/config.hpp"
#include "entropy_lab/error.hpp"
#include "entropy_lab/report.hpp"
#include "entropy_lab/runner.hpp"
#include "entropy_lab/verifier.hpp"

namespace el = entropy_lab;

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed_offset,
            const std::string& out_dir, bool quiet) {
  el::RunConfig config;
  try {
    config = el::load_run_config(config_path);
  } catch (const el::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (!out_dir.empty()) config.output_dir = out_dir;
  el::RunnerOptions options;
  options.seed_offset = seed_offset;
  options.quiet = quiet;
  std::vector<el::RunResult> results;
  try {
    results = el::run_experiment(config, options);
  } catch (const el::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const el::FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  }
  int status = 0;
  for (const auto& r : results) {
    if (r.aborted) {
      std::cerr << r.agent << " seed " << r.seed << " aborted at step " << r.abort_step
                << ": " << r.abort_reason << "\n";
      status = 1;
    }
  }
  std::cout << "wrote " << results.size() << " runs to " << config.output_dir.string()
            << "\n";
  return status;
}

int cmd_verify(el::VerifierConfig config, const std::string& out_path) {
  el::VerifierResult result;
  try {
    result = el::run_verifier(config);
  } catch (const el::InvalidInput& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }
  for (const auto& s : result.suites) {
    std::printf("%-18s %s  %zu/%zu passed (need %zu)  max residual %.3g  %.2fs\n",
                s.name.c_str(), s.pass ? "PASS" : "FAIL", s.passed, s.cases, s.required,
                s.max_residual, s.seconds);
  }
  std::string json = el::to_json(result).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "verify: cannot write " << out_path << "\n";
      return 2;
    }
    out << json;
  }
  std::printf("verification %s\n", result.pass ? "passed" : "FAILED");
  return result.pass ? 0 : 1;
}

int cmd_report(const std::string& input, const std::string& out) {
  el::ReportSummary summary = el::render_report(input, out);
  std::cout << "report: " << summary.runs << " runs, " << summary.agents << " agents, "
            << summary.files.size() << " files in " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual-bandit entropy workbench"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "train agents and write metrics");
  std::string config_path, run_out;
  std::uint64_t seed_offset = 0;
  bool quiet = false;
  run->add_option("--config", config_path, "run configuration (JSON)")->required();
  run->add_option("--seed-offset", seed_offset, "added to every configured seed");
  run->add_option("--out", run_out, "output directory (overrides output_dir)");
  run->add_flag("--quiet", quiet, "no per-run progress lines");

  auto* verify = app.add_subcommand("verify", "check the update-rule predictions");
  el::VerifierConfig vconfig;
  std::string verify_out;
  double lambda = -1.0;
  verify->add_option("--suite", vconfig.suite, "lemma1, thm1, thm2 or all")
      ->check(CLI::IsMember({"lemma1", "thm1", "thm2", "all"}));
  verify->add_option("--lambda", lambda, "step size for thm1/thm2");
  verify->add_option("--seed", vconfig.seed, "seed for the random cases");
  verify->add_option("--threads", vconfig.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_out, "write the JSON report here");
  verify->add_flag("--corrupt-omega-sign", vconfig.corrupt_omega_sign,
                   "negate Omega (fault injection; checks should fail)");

  auto* report = app.add_subcommand("report", "render charts from run outputs");
  std::string report_in, report_out;
  report->add_option("--input", report_in, "directory written by run")->required();
  report->add_option("--out", report_out, "destination directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_path, seed_offset, run_out, quiet);
    if (*verify) {
      if (verify->count("--lambda")) vconfig.lambda = lambda;
      return cmd_verify(vconfig, verify_out);
    }
    if (*report) return cmd_report(report_in, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

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

#ifndef ENTROPY_LAB_REPORT_HPP_
#define ENTROPY_LAB_REPORT_HPP_

// Charts and tables from a directory written by run_experiment.
//
// Outputs: value.svg, entropy.svg (per-state entropy), entropy_marginal.svg,
// <agent>_hist_sorted.svg, <agent>_hist_unsorted.svg, means.csv,
// summary.csv and report.md. Every polyline carries a data-points
// attribute listing its points exactly as they appear in the CSV named by
// its data-csv attribute (a metrics.csv or means.csv).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace entropy_lab {

struct MetricsRow {
  std::size_t step = 0;
  // Cells kept verbatim so charts can quote them.
  std::string value;
  std::string entropy_state;
  std::string entropy_marginal;
};

struct RunSeries {
  std::string agent;
  std::uint64_t seed = 0;
  std::filesystem::path dir;
  std::vector<MetricsRow> rows;
  bool aborted = false;
};

// Throws std::runtime_error("no runs found ...") when nothing matches
// <input>/<agent>/seed_<n>/metrics.csv.
std::vector<RunSeries> discover_runs(const std::filesystem::path& input_dir);

std::vector<MetricsRow> parse_metrics_csv(const std::string& text,
                                          const std::string& source);

struct ReportSummary {
  std::size_t runs = 0;
  std::size_t agents = 0;
  std::vector<std::filesystem::path> files;
};

ReportSummary render_report(const std::filesystem::path& input_dir,
                            const std::filesystem::path& out_dir);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_REPORT_HPP_

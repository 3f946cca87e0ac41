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

#include "entropy_lab/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "entropy_lab/svg.hpp"

namespace entropy_lab {

namespace fs = std::filesystem;

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::size_t parse_count(const std::string& cell, const std::string& where) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(cell, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != cell.size() || cell.empty() || cell[0] == '-') {
    throw std::runtime_error(where + ": expected an integer, got '" + cell + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& cell, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != cell.size()) {
    throw std::runtime_error(where + ": expected a number, got '" + cell + "'");
  }
  return v;
}

// --- line charts -------------------------------------------------------------

struct Series {
  std::string label;
  std::string color;
  double width = 2.0;
  double opacity = 1.0;
  std::string csv;     // where the points can be found verbatim
  std::string column;  // which column holds the y values
  std::vector<std::pair<std::size_t, std::string>> points;
};

constexpr int kChartW = 720;
constexpr int kChartH = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

std::string line_chart(const std::string& title, const std::string& y_label,
                       const std::vector<Series>& series, bool include_zero) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (const auto& [step, cell] : s.points) {
      double y = parse_real(cell, s.csv);
      if (!std::isfinite(y)) continue;
      x_lo = std::min(x_lo, static_cast<double>(step));
      x_hi = std::max(x_hi, static_cast<double>(step));
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (include_zero) y_lo = std::min(y_lo, 0.0);
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi - y_lo < 1e-9) y_lo -= 0.5, y_hi += 0.5;
  double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double pw = kChartW - kLeft - kRight, ph = kChartH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };

  svg::Document doc(kChartW, kChartH);
  doc.rect(0, 0, kChartW, kChartH, "white");
  doc.text(kLeft, 24, title, 15, "start", "font-weight=\"bold\"");
  for (double t : svg::ticks(y_lo, y_hi)) {
    doc.line(kLeft, py(t), kLeft + pw, py(t), "#e5e5e5");
    doc.text(kLeft - 6, py(t) + 4, fmt(t), 11, "end");
  }
  for (double t : svg::ticks(x_lo, x_hi)) {
    doc.line(px(t), kTop + ph, px(t), kTop + ph + 5, "#333");
    doc.text(px(t), kTop + ph + 18, fmt(t), 11, "middle");
  }
  doc.line(kLeft, kTop, kLeft, kTop + ph, "#333");
  doc.line(kLeft, kTop + ph, kLeft + pw, kTop + ph, "#333");
  doc.text(kLeft + pw / 2, kChartH - 10, "interactions", 12, "middle");
  doc.text(16, kTop + ph / 2, y_label, 12, "middle",
           "transform=\"rotate(-90 16 " + svg::coord(kTop + ph / 2) + ")\"");

  std::size_t legend = 0;
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> pts;
    std::string data;
    for (const auto& [step, cell] : s.points) {
      double y = parse_real(cell, s.csv);
      if (!std::isfinite(y)) continue;
      pts.emplace_back(px(static_cast<double>(step)), py(y));
      if (!data.empty()) data += ';';
      data += std::to_string(step) + "," + cell;
    }
    std::string attrs = "data-series=\"" + svg::escape(s.label) + "\" data-csv=\"" +
                        svg::escape(s.csv) + "\" data-column=\"" + s.column +
                        "\" data-points=\"" + data + "\"";
    doc.polyline(pts, s.color, s.width, s.opacity, attrs);
    if (s.opacity >= 1.0) {
      double ly = kTop + 10 + 20.0 * static_cast<double>(legend++);
      doc.line(kLeft + pw + 15, ly, kLeft + pw + 35, ly, s.color, 3);
      doc.text(kLeft + pw + 40, ly + 4, s.label, 12);
    }
  }
  return doc.str();
}

// --- histograms ----------------------------------------------------------------

struct Histogram {
  std::size_t step = 0;
  std::vector<std::size_t> counts;
};

Histogram read_histogram(const fs::path& path) {
  auto rows = lines(read_text(path));
  if (rows.empty() || rows[0] != "step,action,count,sorted_rank") {
    throw std::runtime_error(path.string() + ": unexpected histogram header");
  }
  Histogram h;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto cells = split(rows[i], ',');
    std::string where = path.string() + ":" + std::to_string(i + 1);
    if (cells.size() != 4) throw std::runtime_error(where + ": expected 4 columns");
    h.step = parse_count(cells[0], where);
    std::size_t a = parse_count(cells[1], where);
    if (a >= h.counts.size()) h.counts.resize(a + 1, 0);
    h.counts[a] = parse_count(cells[2], where);
  }
  return h;
}

// Up to four checkpoints spread over the run: first, last and two between.
std::vector<fs::path> pick_checkpoints(const fs::path& dir) {
  std::vector<fs::path> all;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".csv") all.push_back(e.path());
    }
  }
  std::sort(all.begin(), all.end());
  if (all.size() <= 4) return all;
  std::vector<fs::path> out;
  const std::size_t n = all.size();
  for (std::size_t idx : {std::size_t{0}, (n - 1) / 3, 2 * (n - 1) / 3, n - 1}) {
    if (out.empty() || out.back() != all[idx]) out.push_back(all[idx]);
  }
  return out;
}

std::string histogram_chart(const std::string& agent, std::uint64_t seed,
                            const std::vector<Histogram>& hists, bool sorted,
                            const std::string& fill) {
  const double panel_w = 240, panel_h = 180, gap = 20, top = 50, left = 40;
  const int width = static_cast<int>(left + hists.size() * (panel_w + gap) + 10);
  const int height = static_cast<int>(top + panel_h + 50);
  svg::Document doc(std::max(width, 300), height);
  doc.rect(0, 0, std::max(width, 300), height, "white");
  doc.text(left, 24,
           agent + " (seed " + std::to_string(seed) + "): " +
               (sorted ? "sorted" : "unsorted") + " action-selection histograms",
           14, "start", "font-weight=\"bold\"");
  for (std::size_t p = 0; p < hists.size(); ++p) {
    std::vector<std::size_t> counts = hists[p].counts;
    if (sorted) std::sort(counts.begin(), counts.end(), std::greater<>());
    std::size_t peak = 1;
    for (auto c : counts) peak = std::max(peak, c);
    double x0 = left + p * (panel_w + gap);
    double bw = panel_w / std::max<std::size_t>(1, counts.size());
    doc.raw("<g data-step=\"" + std::to_string(hists[p].step) + "\" data-order=\"" +
            (sorted ? "sorted" : "unsorted") + "\">");
    doc.line(x0, top + panel_h, x0 + panel_w, top + panel_h, "#333");
    for (std::size_t a = 0; a < counts.size(); ++a) {
      double h = panel_h * static_cast<double>(counts[a]) / static_cast<double>(peak);
      doc.rect(x0 + a * bw, top + panel_h - h, std::max(bw - 1.0, 0.5), h, fill,
               "data-count=\"" + std::to_string(counts[a]) + "\"");
    }
    doc.raw("</g>");
    doc.text(x0 + panel_w / 2, top + panel_h + 18,
             "step " + std::to_string(hists[p].step), 11, "middle");
    doc.text(x0, top - 6, "max " + std::to_string(peak), 10);
  }
  return doc.str();
}

}  // namespace

std::vector<MetricsRow> parse_metrics_csv(const std::string& text,
                                          const std::string& source) {
  auto rows = lines(text);
  if (rows.empty() || rows[0] != "step,value,entropy_state,entropy_marginal") {
    throw std::runtime_error(source + ": unexpected metrics header");
  }
  std::vector<MetricsRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto cells = split(rows[i], ',');
    std::string where = source + ":" + std::to_string(i + 1);
    if (cells.size() != 4) throw std::runtime_error(where + ": expected 4 columns");
    MetricsRow r;
    r.step = parse_count(cells[0], where);
    for (std::size_t c = 1; c < 4; ++c) parse_real(cells[c], where);
    r.value = cells[1];
    r.entropy_state = cells[2];
    r.entropy_marginal = cells[3];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunSeries> discover_runs(const fs::path& input_dir) {
  std::vector<RunSeries> runs;
  if (fs::is_directory(input_dir)) {
    for (const auto& agent_dir : fs::directory_iterator(input_dir)) {
      if (!agent_dir.is_directory()) continue;
      for (const auto& seed_dir : fs::directory_iterator(agent_dir.path())) {
        std::string name = seed_dir.path().filename().string();
        fs::path csv = seed_dir.path() / "metrics.csv";
        if (name.rfind("seed_", 0) != 0 || !fs::is_regular_file(csv)) continue;
        RunSeries run;
        run.agent = agent_dir.path().filename().string();
        run.seed = parse_count(name.substr(5), seed_dir.path().string());
        run.dir = seed_dir.path();
        run.rows = parse_metrics_csv(read_text(csv), csv.string());
        run.aborted = fs::exists(seed_dir.path() / "abort.json");
        runs.push_back(std::move(run));
      }
    }
  }
  if (runs.empty()) {
    throw std::runtime_error("no runs found under " + input_dir.string() +
                             " (expected <agent>/seed_<n>/metrics.csv)");
  }
  std::sort(runs.begin(), runs.end(), [](const RunSeries& a, const RunSeries& b) {
    return a.agent != b.agent ? a.agent < b.agent : a.seed < b.seed;
  });
  return runs;
}

ReportSummary render_report(const fs::path& input_dir, const fs::path& out_dir) {
  auto runs = discover_runs(input_dir);
  fs::create_directories(out_dir);
  ReportSummary summary;
  summary.runs = runs.size();

  std::vector<std::string> agents;
  for (const auto& r : runs) {
    if (agents.empty() || agents.back() != r.agent) agents.push_back(r.agent);
  }
  summary.agents = agents.size();

  // Means across seeds, per agent and step, over the seeds that reached it.
  struct Mean {
    std::string value, entropy_state, entropy_marginal;
  };
  std::map<std::string, std::vector<std::pair<std::size_t, Mean>>> means;
  std::string means_csv = "agent,step,value,entropy_state,entropy_marginal\n";
  for (const auto& agent : agents) {
    std::map<std::size_t, std::array<double, 4>> acc;  // sums and count
    for (const auto& r : runs) {
      if (r.agent != agent) continue;
      for (const auto& row : r.rows) {
        auto& a = acc[row.step];
        a[0] += std::stod(row.value);
        a[1] += std::stod(row.entropy_state);
        a[2] += std::stod(row.entropy_marginal);
        a[3] += 1.0;
      }
    }
    for (const auto& [step, a] : acc) {
      Mean m{fmt(a[0] / a[3]), fmt(a[1] / a[3]), fmt(a[2] / a[3])};
      means_csv += agent + "," + std::to_string(step) + "," + m.value + "," +
                   m.entropy_state + "," + m.entropy_marginal + "\n";
      means[agent].emplace_back(step, m);
    }
  }
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(out_dir / name, text);
    summary.files.push_back(out_dir / name);
  };
  emit("means.csv", means_csv);

  struct Metric {
    const char* file;
    const char* column;
    const char* title;
    const char* y_label;
    bool include_zero;
  };
  const Metric metrics[] = {
      {"value.svg", "value", "Policy value", "value", false},
      {"entropy.svg", "entropy_state", "Policy entropy (mean per-state)", "nats", true},
      {"entropy_marginal.svg", "entropy_marginal",
       "Policy entropy (sampled action histogram)", "nats", true},
  };
  for (const auto& m : metrics) {
    const std::string column = m.column;
    auto pick = [&](const auto& row) -> const std::string& {
      return column == "value"           ? row.value
             : column == "entropy_state" ? row.entropy_state
                                         : row.entropy_marginal;
    };
    std::vector<Series> series;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (const auto& r : runs) {
        if (r.agent != agents[i]) continue;
        Series s;
        s.label = agents[i] + " seed " + std::to_string(r.seed);
        s.color = color(i);
        s.width = 1.0;
        s.opacity = 0.25;
        // Relative to the chart, which sits in out_dir.
        s.csv = fs::relative(fs::absolute(r.dir / "metrics.csv"), fs::absolute(out_dir))
                    .generic_string();
        s.column = column;
        for (const auto& row : r.rows) s.points.emplace_back(row.step, pick(row));
        series.push_back(std::move(s));
      }
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Series s;
      s.label = agents[i];
      s.color = color(i);
      s.csv = "means.csv";
      s.column = column;
      for (const auto& [step, mean] : means[agents[i]]) s.points.emplace_back(step, pick(mean));
      series.push_back(std::move(s));
    }
    emit(m.file, line_chart(m.title, m.y_label, series, m.include_zero));
  }

  // Histograms from the first seed of each agent.
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const RunSeries* first = nullptr;
    for (const auto& r : runs) {
      if (r.agent == agents[i]) {
        first = &r;
        break;
      }
    }
    std::vector<Histogram> hists;
    for (const auto& p : pick_checkpoints(first->dir / "histograms")) {
      hists.push_back(read_histogram(p));
    }
    if (hists.empty()) continue;
    emit(agents[i] + "_hist_sorted.svg",
         histogram_chart(agents[i], first->seed, hists, true, color(i)));
    emit(agents[i] + "_hist_unsorted.svg",
         histogram_chart(agents[i], first->seed, hists, false, color(i)));
  }

  std::string summary_csv =
      "agent,seed,final_step,final_value,final_entropy_state,min_entropy_state,"
      "final_entropy_marginal,aborted\n";
  for (const auto& r : runs) {
    if (r.rows.empty()) continue;
    const auto& last = r.rows.back();
    const std::string* min_cell = &r.rows.front().entropy_state;
    for (const auto& row : r.rows) {
      if (std::stod(row.entropy_state) < std::stod(*min_cell)) min_cell = &row.entropy_state;
    }
    summary_csv += r.agent + "," + std::to_string(r.seed) + "," + std::to_string(last.step) +
                   "," + last.value + "," + last.entropy_state + "," + *min_cell + "," +
                   last.entropy_marginal + "," + (r.aborted ? "1" : "0") + "\n";
  }
  emit("summary.csv", summary_csv);

  std::ostringstream md;
  md << "# Run report\n\n";
  fs::path info_path = input_dir / "run_info.json";
  if (fs::is_regular_file(info_path)) {
    auto info = nlohmann::json::parse(read_text(info_path));
    md << "- experiment: " << info.value("name", std::string("?")) << "\n";
    md << "- environment: " << info["env"].dump() << "\n";
    md << "- interactions per run: " << info.value("total_interactions", 0) << "\n";
    md << "- checkpoint every: " << info.value("eval_every", 0) << " interactions\n";
    md << "- evaluation states: " << info.value("eval_size", 0) << "\n";
    md << "- seeds: " << info["seeds"].dump() << "\n";
    md << "- " << info.value("scale", std::string("desk scale")) << "\n\n";
  } else {
    md << "- desk scale run (no run_info.json found)\n\n";
  }
  md << "## Final checkpoint\n\n"
     << "| agent | seed | step | value | entropy (per-state) | min entropy (per-state) | "
        "entropy (histogram) | aborted |\n"
     << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& line : lines(summary_csv)) {
    if (line.rfind("agent,", 0) == 0) continue;
    auto cells = split(line, ',');
    md << "|";
    for (const auto& c : cells) md << " " << c << " |";
    md << "\n";
  }
  md << "\n## Charts\n\n";
  for (const auto& f : summary.files) {
    if (f.extension() == ".svg") md << "- [" << f.filename().string() << "](" << f.filename().string() << ")\n";
  }
  md << "\n## Entropy trajectories\n\n"
     << "Per-state entropy and histogram entropy at every checkpoint, one block per run.\n";
  for (const auto& r : runs) {
    md << "\n### " << r.agent << ", seed " << r.seed << (r.aborted ? " (aborted)" : "")
       << "\n\n```\nstep,entropy_state,entropy_marginal\n";
    for (const auto& row : r.rows) {
      md << row.step << "," << row.entropy_state << "," << row.entropy_marginal << "\n";
    }
    md << "```\n";
  }
  emit("report.md", md.str());
  return summary;
}

}  // namespace entropy_lab

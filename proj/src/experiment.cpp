// Copyright 2026 The extravisc Authors
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

#include "extravisc/experiment.hpp"

#include "extravisc/extragradient.hpp"
#include "extravisc/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

namespace extravisc {

using nlohmann::json;

namespace {

void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << *v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void make_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

RunSummary summarize(Algorithm alg, const IterationTrace& trace) {
  RunSummary s;
  s.algorithm = alg;
  s.iterations = trace.last().n;
  s.final_distance = trace.last().distance;
  s.total_ms = trace.total_ms();
  // Per-iteration time excludes the initial projection in record 0.
  if (s.iterations > 0) s.ms_per_iteration = (s.total_ms - trace.records[0].elapsed_ms) / s.iterations;
  for (const auto& r : trace.records) {
    if (r.descent_slack) {
      s.min_descent_slack = s.min_descent_slack ? std::min(*s.min_descent_slack, *r.descent_slack)
                                                : *r.descent_slack;
    }
  }
  s.abort_reason = trace.abort_reason;
  return s;
}

}  // namespace

bool ExperimentReport::any_aborted() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.abort_reason.has_value(); });
}

const RunSummary& ExperimentReport::summary(Algorithm alg) const {
  for (const auto& r : runs) {
    if (r.algorithm == alg) return r;
  }
  throw std::out_of_range("no run for " + algorithm_name(alg));
}

const IterationTrace& ExperimentReport::trace(Algorithm alg) const {
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].algorithm == alg) return traces[i];
  }
  throw std::out_of_range("no run for " + algorithm_name(alg));
}

std::string trace_csv(const IterationTrace& trace) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  os << "n,D_n,step_residual,descent_slack\n";
  for (const auto& r : trace.records) {
    os << r.n << ',';
    put(os, r.distance);
    os << ',' << r.step_residual << ',';
    put(os, r.descent_slack);
    os << '\n';
  }
  return os.str();
}

ExperimentReport run_experiment(const GeneratorSpec& spec, const ExperimentOptions& options,
                                const std::filesystem::path& out_dir) {
  ExperimentReport report;
  report.spec = spec;
  const ProblemInstance instance = generate_instance(spec);
  report.constants = family_constants(instance.bifunctions);
  report.config = default_config(instance, options.alpha, options.iters);
  report.config.seed = spec.seed;
  report.config.workers = options.workers;

  make_dirs(out_dir);
  write_json_file(out_dir / "instance.json", instance_to_json(instance));

  json timings = json::object();
  for (Algorithm alg : options.algorithms) {
    IterationTrace trace = run(instance, report.config, alg);
    const std::string name = algorithm_name(alg);
    write_text(out_dir / (name + ".csv"), trace_csv(trace));
    std::vector<double> ms;
    ms.reserve(trace.records.size());
    for (const auto& r : trace.records) ms.push_back(r.elapsed_ms);
    timings[name] = ms;
    report.runs.push_back(summarize(alg, trace));
    report.traces.push_back(std::move(trace));
  }
  write_json_file(out_dir / "summary.json", summary_json(report));
  write_json_file(out_dir / "timings.json", timings);
  return report;
}

json summary_json(const ExperimentReport& report) {
  json runs = json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"algorithm", algorithm_name(r.algorithm)},
                    {"iterations", r.iterations},
                    {"final_distance", optional_json(r.final_distance)},
                    {"total_ms", r.total_ms},
                    {"ms_per_iteration", r.ms_per_iteration},
                    {"min_descent_slack", optional_json(r.min_descent_slack)},
                    {"skeletal", r.algorithm == Algorithm::kPhem},
                    {"aborted", r.abort_reason.has_value()},
                    {"abort_reason", r.abort_reason ? json(*r.abort_reason) : json(nullptr)}});
  }
  const GeneratorSpec& s = report.spec;
  return json{{"seed", s.seed},
              {"spec", {{"m", s.m}, {"k", s.k}, {"n_bifunctions", s.n_bifunctions}, {"n_maps", s.n_maps}}},
              {"lipschitz", {{"c1", report.constants.c1}, {"c2", report.constants.c2}}},
              {"config", config_to_json(report.config)},
              {"runs", runs}};
}

std::vector<BenchEntry> run_bench(const BenchOptions& options, const std::filesystem::path& out_dir) {
  std::vector<BenchEntry> entries;
  json overview = json::array();
  for (std::uint64_t seed : options.seeds) {
    GeneratorSpec spec = options.shape;
    spec.seed = seed;
    for (const AlphaSchedule& schedule : options.schedules) {
      ExperimentOptions exp{options.algorithms, schedule, options.iters, options.workers};
      const auto dir = out_dir / ("seed_" + std::to_string(seed)) / schedule.name();
      BenchEntry entry{seed, schedule.name(), run_experiment(spec, exp, dir)};
      json row = summary_json(entry.report);
      row["schedule"] = entry.schedule;
      overview.push_back(std::move(row));
      entries.push_back(std::move(entry));
    }
  }
  make_dirs(out_dir);
  write_json_file(out_dir / "bench_summary.json", overview);
  return entries;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto parse_one = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("bad seed '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = parse_one(text.substr(0, dots));
    const std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) seeds.push_back(parse_one(item));
  if (seeds.empty()) throw std::invalid_argument("no seeds in '" + text + "'");
  return seeds;
}

}  // namespace extravisc

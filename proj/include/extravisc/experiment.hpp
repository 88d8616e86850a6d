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

#ifndef EXTRAVISC_EXPERIMENT_HPP
#define EXTRAVISC_EXPERIMENT_HPP

#include "extravisc/generator.hpp"
#include "extravisc/model.hpp"
#include "extravisc/solvers.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace extravisc {

struct ExperimentOptions {
  std::vector<Algorithm> algorithms{Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kPhem};
  AlphaSchedule alpha = AlphaSchedule::inverse();
  int iters = 1000;
  int workers = 1;
};

struct RunSummary {
  Algorithm algorithm = Algorithm::kAlg1;
  int iterations = 0;
  std::optional<double> final_distance;
  double total_ms = 0.0;
  double ms_per_iteration = 0.0;
  std::optional<double> min_descent_slack;
  std::optional<std::string> abort_reason;
};

struct ExperimentReport {
  GeneratorSpec spec;
  SolverConfig config;
  LipschitzConstants constants;
  std::vector<RunSummary> runs;
  std::vector<IterationTrace> traces;

  bool any_aborted() const;
  const RunSummary& summary(Algorithm alg) const;
  const IterationTrace& trace(Algorithm alg) const;
};

/// Trace as CSV: header "n,D_n,step_residual,descent_slack", one row per
/// record, doubles with 17 significant digits, empty cells where a value is
/// undefined. Wall-clock times are kept out of the CSV so that reruns are
/// byte-identical; they go to timings.json.
std::string trace_csv(const IterationTrace& trace);

/// Generates the instance, runs every requested algorithm from the same
/// projected x_0 = (1, ..., 1) under the experiment defaults, and writes
/// into `out_dir`: instance.json, <alg>.csv per algorithm, summary.json
/// (final D_n, wall-clock, iteration count, config echo, seed) and
/// timings.json (per-iteration milliseconds). Filesystem errors are
/// std::runtime_error naming the path.
ExperimentReport run_experiment(const GeneratorSpec& spec, const ExperimentOptions& options,
                                const std::filesystem::path& out_dir);

nlohmann::json summary_json(const ExperimentReport& report);

struct BenchOptions {
  GeneratorSpec shape;
  std::vector<std::uint64_t> seeds;
  std::vector<AlphaSchedule> schedules{AlphaSchedule::inverse(), AlphaSchedule::inverse_sqrt()};
  std::vector<Algorithm> algorithms{Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kPhem};
  int iters = 1000;
  int workers = 1;
};

struct BenchEntry {
  std::uint64_t seed = 0;
  std::string schedule;
  ExperimentReport report;
};

/// One experiment per (seed, schedule) under out_dir/seed_<s>/<schedule>/,
/// plus out_dir/bench_summary.json.
std::vector<BenchEntry> run_bench(const BenchOptions& options, const std::filesystem::path& out_dir);

/// "1..10" (inclusive) or a comma list "1,4,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace extravisc

#endif  // EXTRAVISC_EXPERIMENT_HPP

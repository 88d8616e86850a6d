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

// extravisc: generate instances, run a single solver, or run the benchmark.
// Exit codes: 0 success, 1 validation failure, 2 solver abort.

#include "extravisc/experiment.hpp"
#include "extravisc/extragradient.hpp"
#include "extravisc/generator.hpp"
#include "extravisc/serialization.hpp"
#include "extravisc/solvers.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace ev = extravisc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitAbort = 2;

struct GenerateArgs {
  ev::GeneratorSpec spec;
  std::string out = "instance.json";
};

struct SolveArgs {
  std::string instance;
  std::string config;
  std::string algorithm = "alg1";
  std::string alpha = "inv_n";
  int iters = 1000;
  int workers = 1;
  std::string out_dir = "traces";
};

struct BenchArgs {
  bool paper_defaults = false;
  std::string seeds = "1..10";
  std::string out_dir = "results";
  int iters = 1000;
  int workers = 1;
};

int do_generate(const GenerateArgs& args) {
  const ev::ProblemInstance instance = ev::generate_instance(args.spec);
  ev::write_json_file(args.out, ev::instance_to_json(instance));
  std::cout << "wrote " << args.out << "\n";
  return kExitOk;
}

int do_solve(const SolveArgs& args) {
  const ev::ProblemInstance instance = ev::instance_from_json(ev::read_json_file(args.instance));
  const ev::ValidationReport instance_report = ev::validate_instance(instance);
  if (!instance_report.ok()) {
    std::cerr << "invalid instance: " << instance_report.summary() << "\n";
    return kExitInvalid;
  }

  ev::SolverConfig config;
  if (!args.config.empty()) {
    config = ev::config_from_json(ev::read_json_file(args.config), instance);
  } else {
    config = ev::default_config(instance, ev::AlphaSchedule::from_name(args.alpha), args.iters);
    config.workers = args.workers;
  }
  const ev::ValidationReport config_report = ev::validate_config(config, instance);
  if (!config_report.ok()) {
    std::cerr << "invalid config: " << config_report.summary() << "\n";
    return kExitInvalid;
  }

  const ev::Algorithm alg = ev::algorithm_from_name(args.algorithm);
  const ev::IterationTrace trace = ev::run(instance, config, alg);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  const auto csv_path = dir / (args.algorithm + ".csv");
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << ev::trace_csv(trace);
  }
  const auto& last = trace.last();
  const ev::LipschitzConstants c = ev::family_constants(instance.bifunctions);
  nlohmann::json summary = {
      {"algorithm", args.algorithm},
      {"iterations", last.n},
      {"final_distance", last.distance ? nlohmann::json(*last.distance) : nlohmann::json(nullptr)},
      {"final_step_residual", last.step_residual},
      {"total_ms", trace.total_ms()},
      {"lipschitz", {{"c1", c.c1}, {"c2", c.c2}}},
      {"config", ev::config_to_json(config)},
      {"aborted", trace.aborted()},
      {"abort_reason", trace.abort_reason ? nlohmann::json(*trace.abort_reason) : nlohmann::json(nullptr)}};
  ev::write_json_file(dir / (args.algorithm + "_summary.json"), summary);

  std::cout << args.algorithm << ": " << last.n << " iterations";
  if (last.distance) std::cout << ", D_n = " << *last.distance;
  std::cout << ", " << trace.total_ms() << " ms\n";
  if (trace.aborted()) {
    std::cerr << "solver aborted: " << *trace.abort_reason << "\n";
    return kExitAbort;
  }
  return kExitOk;
}

int do_bench(const BenchArgs& args) {
  ev::BenchOptions options;
  // --paper-defaults selects the stock shape, currently the only one;
  // the flag is accepted for explicitness.
  options.shape = ev::GeneratorSpec{};
  options.seeds = ev::parse_seed_list(args.seeds);
  options.iters = args.iters;
  options.workers = args.workers;

  const auto entries = ev::run_bench(options, args.out_dir);
  int status = kExitOk;
  std::printf("%-6s %-11s %-6s %14s %12s\n", "seed", "alpha", "alg", "D_final", "ms/iter");
  for (const auto& e : entries) {
    for (const auto& r : e.report.runs) {
      std::printf("%-6llu %-11s %-6s %14.6e %12.4f\n", static_cast<unsigned long long>(e.seed),
                  e.schedule.c_str(), ev::algorithm_name(r.algorithm).c_str(),
                  r.final_distance.value_or(-1.0), r.ms_per_iteration);
      if (r.abort_reason) {
        std::fprintf(stderr, "seed %llu %s %s aborted: %s\n", static_cast<unsigned long long>(e.seed),
                     e.schedule.c_str(), ev::algorithm_name(r.algorithm).c_str(), r.abort_reason->c_str());
        status = kExitAbort;
      }
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel extragradient-viscosity solvers for equilibrium and fixed-point problems"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random Nash-Cournot instance as JSON");
  generate->add_option("--m", gen.spec.m, "Space dimension")->check(CLI::PositiveNumber);
  generate->add_option("--k", gen.spec.k, "Constraint rows of C")->check(CLI::PositiveNumber);
  generate->add_option("--n-bifunctions", gen.spec.n_bifunctions, "Number of bifunctions")
      ->check(CLI::PositiveNumber);
  generate->add_option("--m-maps", gen.spec.n_maps, "Number of fixed-point maps")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.spec.seed, "RNG seed");
  generate->add_option("--out", gen.out, "Output path");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one algorithm on an instance");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("--config", solve.config, "Solver config JSON (overrides --alpha/--iters/--workers)");
  solve_cmd->add_option("--algorithm", solve.algorithm)->check(CLI::IsMember({"alg1", "alg2", "phem"}));
  solve_cmd->add_option("--alpha", solve.alpha)->check(CLI::IsMember({"inv_n", "inv_sqrt_n"}));
  solve_cmd->add_option("--iters", solve.iters)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--workers", solve.workers)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out-dir", solve.out_dir);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run all algorithms and both schedules over a seed range");
  bench_cmd->add_flag("--paper-defaults", bench.paper_defaults, "m=10, k=20, N=5, M=20, rho=1/(4 c1), beta=1/4");
  bench_cmd->add_option("--seeds", bench.seeds, "Range a..b or list a,b,c");
  bench_cmd->add_option("--out-dir", bench.out_dir);
  bench_cmd->add_option("--iters", bench.iters)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*generate) return do_generate(gen);
    if (*solve_cmd) return do_solve(solve);
    return do_bench(bench);
  } catch (const std::exception& e) {
    // Solver failures surface through the trace; anything thrown here is bad
    // input (unreadable file, schema, invalid parameters).
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

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
#include "extravisc/generator.hpp"
#include "extravisc/serialization.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <fstream>
#include <sstream>

using namespace extravisc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("extravisc_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("generated instances contain 0 and pass validation") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ProblemInstance inst = generate_instance(GeneratorSpec{10, 20, 5, 20, seed});
    CHECK(inst.feasible_set.A().rows() == 20);
    CHECK(inst.feasible_set.A().cols() == 10);
    CHECK(inst.feasible_set.b().minCoeff() >= 1.0);
    CHECK(inst.feasible_set.b().maxCoeff() <= 10.0);
    CHECK(inst.feasible_set.A().cwiseAbs().maxCoeff() <= 10.0);
    CHECK(inst.feasible_set.contains(Vector::Zero(10)));
    for (const auto& hs : inst.halfspaces) CHECK(hs.offset() >= 1.0);
    for (const auto& f : inst.bifunctions) {
      CHECK(f.q() == Vector::Zero(10));
      const Eigen::SelfAdjointEigenSolver<Matrix> q(f.Q());
      const Eigen::SelfAdjointEigenSolver<Matrix> t(f.Q() - f.P());
      CHECK(q.eigenvalues().minCoeff() >= -1e-8);
      CHECK(q.eigenvalues().maxCoeff() <= 10.0 + 1e-8);
      CHECK(t.eigenvalues().maxCoeff() <= 1e-8);
      CHECK(t.eigenvalues().minCoeff() >= -10.0 - 1e-8);
    }
    const auto report = validate_instance(inst);
    CHECK_MESSAGE(report.ok(), report.summary());
    CHECK(validate_config(default_config(inst), inst).ok());
  }
}

TEST_CASE("generation is deterministic per seed") {
  const GeneratorSpec spec{10, 20, 5, 20, 42};
  const std::string a = instance_to_json(generate_instance(spec)).dump();
  CHECK(a == instance_to_json(generate_instance(spec)).dump());
  GeneratorSpec other = spec;
  other.seed = 43;
  CHECK(a != instance_to_json(generate_instance(other)).dump());
  CHECK_THROWS_AS(generate_instance(GeneratorSpec{0, 1, 1, 1, 0}), std::invalid_argument);
}

TEST_CASE("random_orthogonal is orthogonal with positive R diagonal") {
  StreamRng rng(7, 3);
  const Matrix U = random_orthogonal(rng, 8);
  CHECK((U.transpose() * U - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("parse_seed_list") {
  CHECK(parse_seed_list("1..3") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(parse_seed_list("4,9") == std::vector<std::uint64_t>{4, 9});
  CHECK_THROWS_AS(parse_seed_list("3..1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_seed_list("x"), std::invalid_argument);
}

TEST_CASE("run_experiment writes traces and a summary") {
  const auto dir = scratch("experiment");
  ExperimentOptions opts;
  opts.iters = 40;
  const GeneratorSpec spec{10, 20, 5, 20, 11};
  const auto report = run_experiment(spec, opts, dir);
  CHECK_FALSE(report.any_aborted());
  for (const char* alg : {"alg1", "alg2", "phem"}) {
    const std::string csv = slurp(dir / (std::string(alg) + ".csv"));
    CHECK(csv.rfind("n,D_n,step_residual,descent_slack\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 42);
  }
  const auto summary = read_json_file(dir / "summary.json");
  const double c1 = family_constants(generate_instance(spec).bifunctions).c1;
  CHECK(summary.at("config").at("rho").get<double>() == doctest::Approx(1.0 / (4.0 * c1)).epsilon(1e-15));
  CHECK(summary.at("seed") == 11);
  CHECK(summary.at("runs").size() == 3);
  CHECK(read_json_file(dir / "timings.json").at("alg1").size() == 41);

  const std::string first = slurp(dir / "alg1.csv");
  run_experiment(spec, opts, dir);
  CHECK(slurp(dir / "alg1.csv") == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace_csv leaves undefined cells empty") {
  IterationTrace trace;
  IterationRecord r;
  r.n = 0;
  trace.records.push_back(r);
  r.n = 1;
  r.distance = 0.1;
  r.step_residual = 0.25;
  r.descent_slack = 1.0 / 3.0;
  trace.records.push_back(r);
  CHECK(trace_csv(trace) == "n,D_n,step_residual,descent_slack\n0,,0,\n1,0.10000000000000001,0.25,0.33333333333333331\n");
}

TEST_CASE("run_experiment surfaces filesystem errors with the path") {
  const auto blocker = scratch("blocker");
  { std::ofstream(blocker) << "x"; }
  ExperimentOptions opts;
  opts.iters = 1;
  try {
    run_experiment(GeneratorSpec{}, opts, blocker / "sub");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
  }
  std::filesystem::remove(blocker);
}

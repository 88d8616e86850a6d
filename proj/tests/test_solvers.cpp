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

#include "extravisc/extragradient.hpp"
#include "extravisc/fixed_point.hpp"
#include "extravisc/generator.hpp"
#include "extravisc/parallel.hpp"
#include "extravisc/solvers.hpp"
#include "support.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>

using namespace extravisc;
using extravisc::testing::max_abs_diff;
using extravisc::testing::vec;

namespace {

ProblemInstance small_instance(std::uint64_t seed, int n_bif = 3, int n_maps = 4) {
  return generate_instance(GeneratorSpec{6, 10, n_bif, n_maps, seed});
}

}  // namespace

TEST_CASE("select_furthest") {
  const Vector origin = Vector::Zero(1);
  std::vector<Vector> one{vec({3})};
  CHECK(select_furthest(one, origin).index == 0);
  std::vector<Vector> three{vec({1}), vec({-3}), vec({2})};
  CHECK(select_furthest(three, origin).index == 1);
  CHECK(select_furthest(three, origin).point == vec({-3}));
  std::vector<Vector> tie{vec({2}), vec({-2})};
  CHECK(select_furthest(tie, origin).index == 0);
  CHECK_THROWS_AS(select_furthest(std::vector<Vector>{}, origin), EmptyCandidateList);
}

TEST_CASE("weighted_sum") {
  std::vector<Vector> same(5, vec({0.1, 0.7}));
  const std::vector<double> w(5, 0.2);
  CHECK(max_abs_diff(weighted_sum(same, w), vec({0.1, 0.7})) <= 1e-16);
  std::vector<Vector> pts{vec({1, 0}), vec({0, 1}), vec({2, 2})};
  CHECK(max_abs_diff(weighted_sum(pts, std::vector<double>{0.5, 0.25, 0.25}), vec({1, 0.75})) == 0.0);
}

TEST_CASE("WorkerPool runs every index and rethrows the lowest failure") {
  for (int workers : {1, 3}) {
    WorkerPool pool(workers);
    std::vector<int> hits(50, 0);
    pool.parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::count(hits.begin(), hits.end(), 1) == 50);
    try {
      pool.parallel_for(10, [](std::size_t i) {
        if (i == 3 || i == 7) throw std::runtime_error("task " + std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "task 3");
    }
    std::atomic<int> sum{0};
    pool.parallel_for(4, [&](std::size_t i) { sum += static_cast<int>(i); });
    CHECK(sum == 6);
  }
}

TEST_CASE("the common solution is a fixed point when F vanishes there") {
  ProblemInstance inst = small_instance(1);
  inst.op = Operator::affine_shift(Vector::Zero(6));
  const SolverConfig cfg = default_config(inst);
  WorkerPool pool(1);
  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kAlg2}) {
    const SolverState s0 = initial_state(inst, Vector::Zero(6));
    const SolverState s1 = iterate(alg, s0, inst, cfg, pool);
    CHECK(s1.x == Vector::Zero(6));
    CHECK(s1.t == Vector::Zero(6));
    for (const auto& y : s1.y) CHECK(y == Vector::Zero(6));
    const auto d = check_descent_inequality(s0, s1, inst, cfg, alg);
    CHECK(d.slack == 0.0);
  }
}

TEST_CASE("Alg1 and Alg2 coincide for one bifunction and one map") {
  for (std::uint64_t seed : {1u, 2u}) {
    const ProblemInstance inst = small_instance(seed, 1, 1);
    SolverConfig cfg = default_config(inst, AlphaSchedule::inverse(), 30);
    const auto a = run(inst, cfg, Algorithm::kAlg1);
    const auto b = run(inst, cfg, Algorithm::kAlg2);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t n = 0; n < a.records.size(); ++n) {
      CHECK(max_abs_diff(a.records[n].x, b.records[n].x) <= 1e-12);
    }
  }
}

TEST_CASE("run records and invariants") {
  const ProblemInstance inst = small_instance(4);
  SolverConfig cfg = default_config(inst, AlphaSchedule::inverse(), 0);
  auto trace = run(inst, cfg, Algorithm::kAlg1);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records[0].n == 0);

  cfg.max_iters = 60;
  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kPhem}) {
    trace = run(inst, cfg, alg);
    CHECK_FALSE(trace.aborted());
    CHECK(trace.records.size() == 61);
    // The hybrid step projects onto a subset of C. Alg1/Alg2 output Mann
    // combinations of t_n, which may lie outside C while alpha_n is large;
    // the tail of the run is feasible.
    if (alg == Algorithm::kPhem) {
      for (const auto& r : trace.records) CHECK(r.feasibility_violation <= 1e-6);
    }
    CHECK(trace.records.back().feasibility_violation <= 1e-6);
    for (const auto& r : trace.records) {
      CHECK(r.distance.has_value());
      CHECK(std::isfinite(*r.distance));
      if (alg != Algorithm::kPhem && r.n > 0) {
        REQUIRE(r.descent_slack.has_value());
        CHECK(*r.descent_slack >= -1e-6);
      }
    }
  }
}

TEST_CASE("squared distance grows by at most alpha_n K") {
  // ||x_{n+1}||^2 - ||x_n||^2 <= alpha_n K, K = 2 max |<x_{n+1} - x*, F(zbar_n)>|
  const ProblemInstance inst = small_instance(7);
  const SolverConfig cfg = default_config(inst, AlphaSchedule::inverse(), 100);
  std::vector<double> alphas, growth, cross;
  run(inst, cfg, Algorithm::kAlg1, std::nullopt, [&](const SolverState& p, const SolverState& n) {
    alphas.push_back(n.alpha);
    growth.push_back(n.x.squaredNorm() - p.x.squaredNorm());
    cross.push_back(std::abs(n.x.dot(evaluate_operator(inst.op, n.z_selected))));
  });
  const double K = 2.0 * *std::max_element(cross.begin(), cross.end());
  for (std::size_t n = 0; n < growth.size(); ++n) CHECK(growth[n] <= alphas[n] * K + 1e-10);
}

TEST_CASE("viscosity points stay bounded") {
  // max_n ||t_n - x*|| <= max(||t_0 - x*||, (mu / tau) ||F(x*)||)
  const ProblemInstance inst = small_instance(9);
  const SolverConfig cfg = default_config(inst, AlphaSchedule::inverse_sqrt(), 80);
  const double mu = 1.0;
  const double tau = contraction_gap(inst.op, mu);
  const double bound_tail = mu / tau * evaluate_operator(inst.op, *inst.known_solution).norm();
  std::vector<double> norms;
  run(inst, cfg, Algorithm::kAlg1, std::nullopt,
      [&](const SolverState&, const SolverState& n) { norms.push_back(n.t.norm()); });
  const double bound = std::max(norms.front(), bound_tail);
  for (double v : norms) CHECK(v <= bound + 1e-6);
}

TEST_CASE("hybrid baseline degenerate half-spaces") {
  const ProblemInstance inst = small_instance(3);
  const SolverConfig cfg = default_config(inst);
  WorkerPool pool(1);
  // x_0 = x_n = 0 = v_n: both rows are dropped and the projection returns x_0.
  const SolverState s0 = initial_state(inst, Vector::Zero(6));
  const SolverState s1 = iterate_phem_baseline(s0, inst, cfg, pool);
  CHECK(s1.x == s0.x0);

  const auto trace = run(inst, default_config(inst, AlphaSchedule::inverse(), 100), Algorithm::kPhem);
  CHECK(*trace.records.back().distance < *trace.records.front().distance);
  // Projection onto a shrinking family: |x_n - x_0| is nondecreasing.
  const Vector x0 = trace.records.front().x;
  for (std::size_t n = 1; n < trace.records.size(); ++n) {
    CHECK((trace.records[n].x - x0).norm() >= (trace.records[n - 1].x - x0).norm() - 1e-8);
  }
}

TEST_CASE("descent check preconditions") {
  ProblemInstance inst = small_instance(2);
  const SolverConfig cfg = default_config(inst);
  WorkerPool pool(1);
  const SolverState s0 = initial_state(inst, Vector::Ones(6));
  const SolverState s1 = iterate_alg1(s0, inst, cfg, pool);
  CHECK_THROWS_AS(check_descent_inequality(s0, s1, inst, cfg, Algorithm::kPhem), std::invalid_argument);
  inst.known_solution.reset();
  CHECK_THROWS_AS(check_descent_inequality(s0, s1, inst, cfg, Algorithm::kAlg1), MissingKnownSolution);

  SolverConfig bad = cfg;
  bad.rho = 1.0 / (2.0 * family_constants(inst.bifunctions).c1) * 1.2;
  CHECK_THROWS_AS(run(inst, bad, Algorithm::kAlg1), std::invalid_argument);
}

TEST_CASE("worker count does not change the trace") {
  const ProblemInstance inst = small_instance(5);
  SolverConfig cfg = default_config(inst, AlphaSchedule::inverse(), 25);
  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kPhem}) {
    cfg.workers = 1;
    const auto a = run(inst, cfg, alg);
    cfg.workers = 4;
    const auto b = run(inst, cfg, alg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t n = 0; n < a.records.size(); ++n) CHECK(a.records[n].x == b.records[n].x);
  }
}

TEST_CASE("stop_tol ends the run early") {
  const ProblemInstance inst = small_instance(6);
  SolverConfig cfg = default_config(inst, AlphaSchedule::inverse(), 500);
  cfg.stop_tol = 1e-2;
  const auto trace = run(inst, cfg, Algorithm::kAlg1);
  CHECK(trace.records.size() < 501);
  CHECK(trace.records.back().step_residual < 1e-2);
}

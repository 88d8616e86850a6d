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

#ifndef EXTRAVISC_SOLVERS_HPP
#define EXTRAVISC_SOLVERS_HPP

#include "extravisc/model.hpp"
#include "extravisc/parallel.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace extravisc {

/// kAlg1: furthest-point selection of z and u.
/// kAlg2: convex combinations of z and u.
/// kPhem: skeletal parallel hybrid extragradient baseline; x_{n+1} is the
/// projection of x_0 onto C n C_n n Q_n.
enum class Algorithm { kAlg1, kAlg2, kPhem };

std::string algorithm_name(Algorithm alg);
/// "alg1", "alg2" or "phem".
Algorithm algorithm_from_name(const std::string& name);

class EmptyCandidateList : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingKnownSolution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An inner solve failed; the message names the iteration, step and index.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Selection {
  std::size_t index = 0;
  Vector point;
};

/// The candidate furthest from `reference` in the Euclidean norm; ties go to
/// the lowest index.
Selection select_furthest(std::span<const Vector> candidates, const Vector& reference);

/// sum_i w_i v_i by pairwise summation in ascending index order.
Vector weighted_sum(std::span<const Vector> points, std::span<const double> weights);

/// Dual multipliers carried between outer iterations, one slot per task.
struct WarmStarts {
  std::vector<std::optional<Vector>> step1;
  std::vector<std::optional<Vector>> maps;
  std::optional<Vector> hybrid;
};

/// x_n plus the intermediates of the iteration that produced it (empty at
/// n = 0).
struct SolverState {
  int n = 0;
  Vector x;
  /// Projected starting point; the hybrid baseline projects it every step.
  Vector x0;

  std::vector<Vector> y;
  std::vector<Vector> z;
  /// z-bar for Alg1 and the baseline, the weighted z for Alg2.
  Vector z_selected;
  std::optional<int> selected_bifunction;
  std::optional<int> selected_map;
  double alpha = 0.0;
  Vector t;
  std::vector<Vector> u;

  WarmStarts warm;
};

/// State at n = 0 with x_0 projected onto C.
SolverState initial_state(const ProblemInstance& instance, const Vector& x0,
                          double tol = 1e-10);

SolverState iterate_alg1(const SolverState& state, const ProblemInstance& instance,
                         const SolverConfig& config, WorkerPool& pool);
SolverState iterate_alg2(const SolverState& state, const ProblemInstance& instance,
                         const SolverConfig& config, WorkerPool& pool);
SolverState iterate_phem_baseline(const SolverState& state, const ProblemInstance& instance,
                                  const SolverConfig& config, WorkerPool& pool);

SolverState iterate(Algorithm alg, const SolverState& state, const ProblemInstance& instance,
                    const SolverConfig& config, WorkerPool& pool);

/// Both sides of the per-iteration descent bound
///   ||x_{n+1} - x*||^2 <= ||x_n - x*||^2 - (1 - 2 rho c1) A - (1 - 2 rho c2) B
///                         - ||x_{n+1} - z||^2 - 2 alpha_n <x_{n+1} - x*, F(z)>
/// with A = ||y - x_n||^2, B = ||y - z||^2 for the selected index (Alg1) or
/// their w-weighted sums (Alg2). slack = rhs - lhs.
struct DiagnosticRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

/// Throws MissingKnownSolution without a known solution, and
/// std::invalid_argument for the hybrid baseline.
DiagnosticRecord check_descent_inequality(const SolverState& prev, const SolverState& next,
                                          const ProblemInstance& instance,
                                          const SolverConfig& config, Algorithm alg);

/// Called after each completed iteration with (x_n state, x_{n+1} state).
using StepObserver = std::function<void(const SolverState&, const SolverState&)>;

/// Runs `alg` from x_0 (default (1, ..., 1)) projected onto C. Stops after
/// max_iters, or earlier once ||x_{n+1} - x_n|| < stop_tol (and D_n <
/// target_distance when x* is known). Inner failures end the run with
/// `abort_reason` set; the records so far are kept. Throws
/// std::invalid_argument when the instance or config fails validation.
IterationTrace run(const ProblemInstance& instance, const SolverConfig& config, Algorithm alg,
                   const std::optional<Vector>& x0 = std::nullopt,
                   const StepObserver& observer = {});

}  // namespace extravisc

#endif  // EXTRAVISC_SOLVERS_HPP

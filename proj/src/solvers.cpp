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

#include "extravisc/solvers.hpp"

#include "extravisc/extragradient.hpp"
#include "extravisc/fixed_point.hpp"
#include "extravisc/qp.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace extravisc {

namespace {

std::string where(int n, const char* step, const char* kind, std::size_t index) {
  std::ostringstream os;
  os << "iteration " << n << ", " << step << ", " << kind << " " << index;
  return os.str();
}

// Wraps any inner failure with its location so that the pool rethrows a
// message naming the step and index.
template <typename Fn>
void with_context(const std::string& context, Fn&& fn) {
  try {
    fn();
  } catch (const SolverAbort&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverAbort(context + ": " + e.what());
  }
}

double step_size(const SolverState& state, const ProblemInstance& instance,
                 const SolverConfig& config) {
  return std::min(config.alpha(state.n), max_viscosity_step(instance.op));
}

// Steps 1 and 2, shared by every scheme: y^i then z^i for all i, with a
// barrier between them. Step 2 is warm-started from the step-1 multipliers
// of the same i.
void extragradient_steps(const SolverState& state, SolverState& next,
                         const ProblemInstance& instance, const SolverConfig& config,
                         WorkerPool& pool) {
  const std::size_t N = instance.bifunctions.size();
  const PolyhedralSet& C = instance.feasible_set;
  next.y.assign(N, Vector());
  next.z.assign(N, Vector());
  next.warm.step1.assign(N, std::nullopt);
  std::vector<Vector> step1_duals(N);

  pool.parallel_for(N, [&](std::size_t i) {
    with_context(where(state.n, "step 1", "bifunction", i), [&] {
      const auto warm = i < state.warm.step1.size() ? state.warm.step1[i] : std::nullopt;
      QpSolution sol = solve_proximal(instance.bifunctions[i], state.x, state.x, config.rho,
                                      C, config.inner_tol, warm);
      require_converged(sol, "proximal QP");
      next.y[i] = std::move(sol.y);
      step1_duals[i] = std::move(sol.multipliers);
    });
  });
  pool.parallel_for(N, [&](std::size_t i) {
    with_context(where(state.n, "step 2", "bifunction", i), [&] {
      QpSolution sol = solve_proximal(instance.bifunctions[i], state.x, next.y[i], config.rho,
                                      C, config.inner_tol, step1_duals[i]);
      require_converged(sol, "proximal QP");
      next.z[i] = std::move(sol.y);
    });
  });
  for (std::size_t i = 0; i < N; ++i) next.warm.step1[i] = std::move(step1_duals[i]);
}

// u^j = (1 - beta^j) p + beta^j S_j p for all j.
std::vector<Vector> mann_steps(const SolverState& state, SolverState& next, const Vector& p,
                               const char* step, const SolverConfig& config, WorkerPool& pool,
                               const std::vector<CompositeProjectionMap>& maps) {
  const std::size_t M = maps.size();
  std::vector<Vector> u(M);
  next.warm.maps.assign(M, std::nullopt);
  pool.parallel_for(M, [&](std::size_t j) {
    with_context(where(state.n, step, "map", j), [&] {
      const auto warm = j < state.warm.maps.size() ? state.warm.maps[j] : std::nullopt;
      QpSolution sol = apply_map_solution(maps[j], p, config.inner_tol, warm);
      require_converged(sol, "polyhedron projection");
      u[j] = mann_combination(p, sol.y, config.mann_coefficients[j], maps[j].modulus());
      next.warm.maps[j] = std::move(sol.multipliers);
    });
  });
  return u;
}

SolverState start_next(const SolverState& state) {
  SolverState next;
  next.n = state.n + 1;
  next.x0 = state.x0;
  next.warm.hybrid = state.warm.hybrid;
  return next;
}

}  // namespace

std::string algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::kAlg1:
      return "alg1";
    case Algorithm::kAlg2:
      return "alg2";
    case Algorithm::kPhem:
      return "phem";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "alg1") return Algorithm::kAlg1;
  if (name == "alg2") return Algorithm::kAlg2;
  if (name == "phem") return Algorithm::kPhem;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected alg1, alg2 or phem)");
}

Selection select_furthest(std::span<const Vector> candidates, const Vector& reference) {
  if (candidates.empty()) throw EmptyCandidateList("select_furthest: no candidates");
  std::size_t best = 0;
  double best_dist = (candidates[0] - reference).squaredNorm();
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double d = (candidates[i] - reference).squaredNorm();
    if (d > best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return {best, candidates[best]};
}

Vector weighted_sum(std::span<const Vector> points, std::span<const double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum: need matching nonempty inputs");
  }
  if (points.size() == 1) return weights[0] * points[0];
  const std::size_t mid = points.size() / 2;
  return weighted_sum(points.first(mid), weights.first(mid)) +
         weighted_sum(points.subspan(mid), weights.subspan(mid));
}

SolverState initial_state(const ProblemInstance& instance, const Vector& x0, double tol) {
  if (x0.size() != instance.dimension()) {
    throw std::invalid_argument("initial point has wrong dimension");
  }
  SolverState state;
  state.x = project_polyhedron(instance.feasible_set, x0, tol);
  state.x0 = state.x;
  return state;
}

SolverState iterate_alg1(const SolverState& state, const ProblemInstance& instance,
                         const SolverConfig& config, WorkerPool& pool) {
  SolverState next = start_next(state);
  extragradient_steps(state, next, instance, config, pool);

  const Selection zbar = select_furthest(next.z, state.x);
  next.selected_bifunction = static_cast<int>(zbar.index);
  next.z_selected = zbar.point;
  next.alpha = step_size(state, instance, config);
  next.t = viscosity_point(instance.op, next.z_selected, next.alpha);

  const auto maps = make_maps(instance);
  next.u = mann_steps(state, next, next.t, "step 3", config, pool, maps);
  const Selection chosen = select_furthest(next.u, next.t);
  next.selected_map = static_cast<int>(chosen.index);
  next.x = chosen.point;
  return next;
}

SolverState iterate_alg2(const SolverState& state, const ProblemInstance& instance,
                         const SolverConfig& config, WorkerPool& pool) {
  SolverState next = start_next(state);
  extragradient_steps(state, next, instance, config, pool);

  next.z_selected = weighted_sum(next.z, config.bifunction_weights.values());
  next.alpha = step_size(state, instance, config);
  next.t = viscosity_point(instance.op, next.z_selected, next.alpha);

  const auto maps = make_maps(instance);
  next.u = mann_steps(state, next, next.t, "step 3", config, pool, maps);
  next.x = weighted_sum(next.u, config.map_weights.values());
  return next;
}

SolverState iterate_phem_baseline(const SolverState& state, const ProblemInstance& instance,
                                  const SolverConfig& config, WorkerPool& pool) {
  SolverState next = start_next(state);
  extragradient_steps(state, next, instance, config, pool);

  const Selection zbar = select_furthest(next.z, state.x);
  next.selected_bifunction = static_cast<int>(zbar.index);
  next.z_selected = zbar.point;
  next.t = next.z_selected;

  const auto maps = make_maps(instance);
  next.u = mann_steps(state, next, next.z_selected, "mann step", config, pool, maps);
  const Selection v = select_furthest(next.u, state.x);
  next.selected_map = static_cast<int>(v.index);

  // C_n = {p : ||v - p|| <= ||x_n - p||} = {p : <2 (x_n - v), p> <= ||x_n||^2 - ||v||^2}
  // Q_n = {p : <x_0 - x_n, p - x_n> <= 0}
  // A zero normal means the set is the whole space and the row is dropped.
  std::vector<HalfSpace> rows;
  const Vector cn_normal = 2.0 * (state.x - v.point);
  if (!cn_normal.isZero(0.0)) {
    rows.emplace_back(cn_normal, state.x.squaredNorm() - v.point.squaredNorm());
  }
  const Vector qn_normal = state.x0 - state.x;
  if (!qn_normal.isZero(0.0)) rows.emplace_back(qn_normal, qn_normal.dot(state.x));

  const PolyhedralSet hybrid = instance.feasible_set.with_rows(rows);
  std::optional<Vector> warm = state.warm.hybrid;
  if (warm && warm->size() != hybrid.constraint_count()) warm.reset();
  QpSolution sol = solve_projection(hybrid, state.x0, warm, config.inner_tol);
  if (sol.status == QpStatus::kInfeasible) {
    throw SolverAbort(where(state.n, "hybrid projection", "set", 0) +
                      ": empty intersection C n C_n n Q_n");
  }
  with_context(where(state.n, "hybrid projection", "set", 0),
               [&] { require_converged(sol, "hybrid projection"); });
  next.warm.hybrid = std::move(sol.multipliers);
  next.x = std::move(sol.y);
  return next;
}

SolverState iterate(Algorithm alg, const SolverState& state, const ProblemInstance& instance,
                    const SolverConfig& config, WorkerPool& pool) {
  switch (alg) {
    case Algorithm::kAlg1:
      return iterate_alg1(state, instance, config, pool);
    case Algorithm::kAlg2:
      return iterate_alg2(state, instance, config, pool);
    case Algorithm::kPhem:
      return iterate_phem_baseline(state, instance, config, pool);
  }
  throw std::logic_error("unknown algorithm");
}

DiagnosticRecord check_descent_inequality(const SolverState& prev, const SolverState& next,
                                          const ProblemInstance& instance,
                                          const SolverConfig& config, Algorithm alg) {
  if (!instance.known_solution) {
    throw MissingKnownSolution("descent check needs the instance's known solution");
  }
  if (alg == Algorithm::kPhem) {
    throw std::invalid_argument("descent check applies to alg1 and alg2 only");
  }
  const Vector& xs = *instance.known_solution;
  const LipschitzConstants c = family_constants(instance.bifunctions);
  const double k1 = 1.0 - 2.0 * config.rho * c.c1;
  const double k2 = 1.0 - 2.0 * config.rho * c.c2;

  double y_to_x = 0.0;
  double y_to_z = 0.0;
  if (alg == Algorithm::kAlg1) {
    const auto i = static_cast<std::size_t>(next.selected_bifunction.value());
    y_to_x = (next.y[i] - prev.x).squaredNorm();
    y_to_z = (next.y[i] - next.z[i]).squaredNorm();
  } else {
    const auto w = config.bifunction_weights.values();
    for (std::size_t i = 0; i < next.y.size(); ++i) {
      y_to_x += w[i] * (next.y[i] - prev.x).squaredNorm();
      y_to_z += w[i] * (next.y[i] - next.z[i]).squaredNorm();
    }
  }
  const Vector& z = next.z_selected;
  DiagnosticRecord rec;
  rec.lhs = (next.x - xs).squaredNorm();
  rec.rhs = (prev.x - xs).squaredNorm() - k1 * y_to_x - k2 * y_to_z -
            (next.x - z).squaredNorm() -
            2.0 * next.alpha * (next.x - xs).dot(evaluate_operator(instance.op, z));
  rec.slack = rec.rhs - rec.lhs;
  return rec;
}

IterationTrace run(const ProblemInstance& instance, const SolverConfig& config, Algorithm alg,
                   const std::optional<Vector>& x0, const StepObserver& observer) {
  if (const auto r = validate_instance(instance); !r.ok()) {
    throw std::invalid_argument("invalid instance: " + r.summary());
  }
  if (const auto r = validate_config(config, instance); !r.ok()) {
    throw std::invalid_argument("invalid config: " + r.summary());
  }
  using Clock = std::chrono::steady_clock;
  const std::optional<Vector>& xs = instance.known_solution;
  const bool diagnose = xs.has_value() && alg != Algorithm::kPhem;

  WorkerPool pool(config.workers);
  IterationTrace trace;
  const auto t_start = Clock::now();
  SolverState state =
      initial_state(instance, x0.value_or(Vector::Ones(instance.dimension())), config.inner_tol);

  IterationRecord first;
  first.n = 0;
  first.x = state.x;
  if (xs) first.distance = (state.x - *xs).norm();
  first.feasibility_violation = instance.feasible_set.violation(state.x);
  first.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t_start).count();
  trace.records.push_back(std::move(first));

  while (state.n < config.max_iters) {
    SolverState next;
    const auto t0 = Clock::now();
    try {
      next = iterate(alg, state, instance, config, pool);
    } catch (const std::exception& e) {
      trace.abort_reason = e.what();
      break;
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    IterationRecord rec;
    rec.n = next.n;
    rec.x = next.x;
    if (xs) rec.distance = (next.x - *xs).norm();
    rec.selected_bifunction = next.selected_bifunction;
    rec.selected_map = next.selected_map;
    rec.step_residual = (next.x - state.x).norm();
    if (diagnose) {
      rec.descent_slack = check_descent_inequality(state, next, instance, config, alg).slack;
    }
    rec.feasibility_violation = instance.feasible_set.violation(next.x);
    rec.elapsed_ms = ms;
    if (observer) observer(state, next);

    const bool converged =
        rec.step_residual < config.stop_tol &&
        (!rec.distance || *rec.distance < config.target_distance || config.target_distance <= 0.0);
    trace.records.push_back(std::move(rec));
    state = std::move(next);
    if (converged) break;
  }
  return trace;
}

}  // namespace extravisc

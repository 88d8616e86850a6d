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

#ifndef EXTRAVISC_QP_HPP
#define EXTRAVISC_QP_HPP

#include "extravisc/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace extravisc {

/// min 1/2 y'Hy + c'y  s.t.  A y <= b, with H symmetric positive definite.
struct QuadraticSubproblem {
  Matrix hessian;
  Vector linear;
  PolyhedralSet set;
};

enum class QpStatus { kConverged, kIterationLimit, kInfeasible };

struct QpSolution {
  Vector y;
  /// Multipliers of A y <= b; pass back as a warm start.
  Vector multipliers;
  double kkt_residual = 0.0;
  std::vector<int> active_set;
  int iterations = 0;
  QpStatus status = QpStatus::kConverged;

  bool converged() const { return status == QpStatus::kConverged; }
};

class QpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carries the best iterate found before the cap was hit.
class IterationLimitExceeded : public QpError {
 public:
  IterationLimitExceeded(const std::string& what, QpSolution best)
      : QpError(what), best_(std::move(best)) {}
  const QpSolution& best() const { return best_; }

 private:
  QpSolution best_;
};

class InfeasibleSet : public QpError {
 public:
  using QpError::QpError;
};

class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultInnerTol = 1e-10;

/// KKT residual of (y, lambda): the max of primal infeasibility,
/// ||H y + c + A' lambda||_inf, negativity of lambda, and
/// max_i |lambda_i (A y - b)_i|.
double kkt_residual(const QuadraticSubproblem& qp, const Vector& y,
                    const Vector& multipliers);

/// Exact Euclidean projection onto a half-space.
Vector project_halfspace(const HalfSpace& hs, const Vector& x);

/// Dual accelerated projected gradient on the multipliers of A y <= b.
///
/// The dual of a strictly convex QP over a polyhedron is a concave quadratic
/// over the nonnegative orthant, so each step is a gradient step followed by
/// clipping at zero. Momentum is restarted whenever it points uphill.
/// Every few steps the positive multipliers are taken as a guess of the
/// active set and the equality-constrained KKT system on that set is solved
/// exactly; the guess is accepted when the KKT residual is at most `tol`.
///
/// `warm_start` is a multiplier vector (length k) from a previous solve of a
/// problem with the same constraint rows. The iteration cap is 50 k m.
/// Never throws on non-convergence: the status says what happened and `y`
/// holds the best iterate seen.
QpSolution solve_qp(const QuadraticSubproblem& qp,
                    const std::optional<Vector>& warm_start = std::nullopt,
                    double tol = kDefaultInnerTol);

/// Test oracle: enumerates all 2^k candidate active sets. Requires k <= 12.
Vector brute_force_qp(const QuadraticSubproblem& qp);

/// Projection onto C as the QP with H = I, c = -x.
QpSolution solve_projection(const PolyhedralSet& set, const Vector& x,
                            const std::optional<Vector>& warm_start = std::nullopt,
                            double tol = kDefaultInnerTol);

/// As `solve_projection` but returns the point; throws
/// IterationLimitExceeded or InfeasibleSet on failure.
Vector project_polyhedron(const PolyhedralSet& set, const Vector& x,
                          double tol = kDefaultInnerTol);

/// Least-norm point of the set, or nullopt when the set is empty.
std::optional<Vector> find_feasible_point(const PolyhedralSet& set,
                                          double tol = kDefaultInnerTol);

/// Throws the matching exception when `sol` did not converge. `context`
/// prefixes the message.
const QpSolution& require_converged(const QpSolution& sol,
                                    const std::string& context);

}  // namespace extravisc

#endif  // EXTRAVISC_QP_HPP

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

#ifndef EXTRAVISC_MODEL_HPP
#define EXTRAVISC_MODEL_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace extravisc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Tolerance for the eigenvalue sign checks on Q and Q - P.
inline constexpr double kPsdTolerance = 1e-8;

/// Closed half-space {x : <h, x> <= l}.
class HalfSpace {
 public:
  /// Throws std::invalid_argument when `normal` is the zero vector.
  HalfSpace(Vector normal, double offset);

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  Index dimension() const { return normal_.size(); }

  /// max(0, <h, x> - l).
  double violation(const Vector& x) const;

 private:
  Vector normal_;
  double offset_;
};

/// Polyhedron {x : A x <= b} with A of shape k x m. A set with zero rows is
/// the whole space. Emptiness is not checked here; see
/// `find_feasible_point` and `validate_instance`.
class PolyhedralSet {
 public:
  PolyhedralSet(Matrix A, Vector b);

  static PolyhedralSet whole_space(Index dimension);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  Index dimension() const { return A_.cols(); }
  Index constraint_count() const { return A_.rows(); }

  /// max(0, max_i (A x - b)_i); zero for a set without rows.
  double violation(const Vector& x) const;
  bool contains(const Vector& x, double tol = 0.0) const {
    return violation(x) <= tol;
  }

  /// Copy of this set with extra rows appended.
  PolyhedralSet with_rows(std::span<const HalfSpace> rows) const;

 private:
  Matrix A_;
  Vector b_;
};

/// f(x, y) = <P x + Q y + q, y - x>, the affine Nash-Cournot family.
class LinearBifunction {
 public:
  LinearBifunction(Matrix P, Matrix Q, Vector q);

  const Matrix& P() const { return P_; }
  const Matrix& Q() const { return Q_; }
  const Vector& q() const { return q_; }
  Index dimension() const { return q_.size(); }

 private:
  Matrix P_;
  Matrix Q_;
  Vector q_;
};

enum class OperatorKind { kAffineShift };

/// Strongly monotone, Lipschitz operator F. Only F(x) = x - a ships, for
/// which eta = L = 1.
class Operator {
 public:
  static Operator affine_shift(Vector shift);

  OperatorKind kind() const { return kind_; }
  const Vector& shift() const { return shift_; }
  double strong_monotonicity() const { return eta_; }
  double lipschitz() const { return lipschitz_; }
  Index dimension() const { return shift_.size(); }

 private:
  Operator(OperatorKind kind, Vector shift, double eta, double lipschitz);

  OperatorKind kind_;
  Vector shift_;
  double eta_;
  double lipschitz_;
};

struct ProblemInstance {
  PolyhedralSet feasible_set;
  std::vector<LinearBifunction> bifunctions;
  /// T_j; the fixed-point maps are S_j = P_C P_{T_j}.
  std::vector<HalfSpace> halfspaces;
  Operator op;
  /// Demicontractive modulus shared by every S_j. Zero for projection
  /// composites.
  double demicontractive_modulus = 0.0;
  std::optional<Vector> known_solution;

  Index dimension() const { return feasible_set.dimension(); }
};

/// Positive weights summing to one. Invalid input is rejected at
/// construction.
class SimplexWeights {
 public:
  SimplexWeights() = default;
  explicit SimplexWeights(std::vector<double> values);
  static SimplexWeights uniform(std::size_t count);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

enum class AlphaRule { kInverse, kInverseSqrt, kCustom };

/// Viscosity step sizes alpha_n, n = 0, 1, 2, ...
class AlphaSchedule {
 public:
  /// 1 / (n + 1)
  static AlphaSchedule inverse();
  /// 1 / (n + 1)^0.5
  static AlphaSchedule inverse_sqrt();
  static AlphaSchedule custom(std::vector<double> values);
  /// "inv_n" or "inv_sqrt_n"; throws std::invalid_argument otherwise.
  static AlphaSchedule from_name(const std::string& name);

  AlphaRule rule() const { return rule_; }
  const std::vector<double>& custom_values() const { return custom_; }
  std::string name() const;

  /// Throws std::out_of_range when a custom list is too short.
  double operator()(int n) const;

 private:
  AlphaRule rule_ = AlphaRule::kInverse;
  std::vector<double> custom_;
};

struct SolverConfig {
  double rho = 0.0;
  AlphaSchedule alpha = AlphaSchedule::inverse();
  /// beta_n^j, one constant per map.
  std::vector<double> mann_coefficients;
  SimplexWeights bifunction_weights;
  SimplexWeights map_weights;
  double inner_tol = 1e-10;
  int max_iters = 1000;
  /// Stop once ||x_{n+1} - x_n|| < stop_tol; 0 runs the full budget.
  double stop_tol = 0.0;
  /// When a known solution exists, residual stopping also requires
  /// D_n < target_distance.
  double target_distance = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Lipschitz-type constants c1, c2 of a bifunction (or the family maxima).
struct LipschitzConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Largest admissible rho is min(1/(2 c1), 1/(2 c2)); infinite when both
/// constants vanish.
double rho_upper_bound(const LipschitzConstants& c);

/// The experiment defaults: rho = 1/(4 c1), w = 1/N, gamma = 1/M,
/// beta_n^j = 1/4.
SolverConfig default_config(const ProblemInstance& instance,
                                  AlphaSchedule alpha = AlphaSchedule::inverse(),
                                  int max_iters = 1000);

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  void add(std::string issue) { issues.push_back(std::move(issue)); }
  /// Issues joined with "; ".
  std::string summary() const;
};

ValidationReport validate_instance(const ProblemInstance& instance,
                                   double eps_psd = kPsdTolerance);
ValidationReport validate_config(const SolverConfig& config,
                                 const ProblemInstance& instance);

/// One row of a solver trace.
struct IterationRecord {
  int n = 0;
  Vector x;
  std::optional<double> distance;
  std::optional<int> selected_bifunction;
  std::optional<int> selected_map;
  double step_residual = 0.0;
  std::optional<double> descent_slack;
  double feasibility_violation = 0.0;
  double elapsed_ms = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  std::optional<std::string> abort_reason;

  bool aborted() const { return abort_reason.has_value(); }
  const IterationRecord& last() const { return records.back(); }
  double total_ms() const;
};

}  // namespace extravisc

#endif  // EXTRAVISC_MODEL_HPP
